#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace cst {

inline constexpr double pi = std::numbers::pi;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
    friend double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
};

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    double operator()(int row, int col) const { return m[3 * row + col]; }
    double& operator()(int row, int col) { return m[3 * row + col]; }

    Vec3 column(int col) const { return {m[col], m[3 + col], m[6 + col]}; }

    friend Vec3 operator*(const Mat3& a, Vec3 v) {
        return {a.m[0] * v.x + a.m[1] * v.y + a.m[2] * v.z,
                a.m[3] * v.x + a.m[4] * v.y + a.m[5] * v.z,
                a.m[6] * v.x + a.m[7] * v.y + a.m[8] * v.z};
    }
    friend Mat3 operator*(const Mat3& a, const Mat3& b);
    Mat3 transposed() const;
    double determinant() const;

    static Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
};

/// Polar sampling of the detector sphere (and of the reconstruction shells).
enum class ThetaSampling { gauss_legendre, uniform };

/// Acquisition, discretization and regularization parameters.
struct ScanConfig {
    double R = 0.125;          // detector sphere radius
    double r_m = 0.14;         // inner support radius
    double r_M = 1.8;          // outer support radius
    double r_M_star = 3.6;     // largest generating-circle diameter
    int N = 16;                // harmonic expansion order
    int N_alpha = 33;          // azimuthal detector positions, 2N + 1
    int N_beta = 17;           // polar detector positions
    int N_p = 64;              // torus diameters
    int N_r = 64;              // radial unknowns, equal to N_p
    int N_gamma = 64;          // half the gamma samples per torus
    int N_psi = 128;           // psi samples per torus
    double lambda = 0.01;      // Tikhonov weight
    std::uint64_t seed = 1;
    ThetaSampling theta_sampling = ThetaSampling::gauss_legendre;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct DetectorAngles {
    double alpha = 0;  // azimuth in [0, 2pi)
    double beta = 0;   // polar in [0, pi]
};

struct TorusLabel {
    double p = 0;  // generating-circle diameter, > R
    DetectorAngles angles;
};

Vec3 detector_position(DetectorAngles angles, double R);

/// Rotation about z by alpha.
Mat3 rotation_z(double alpha);
/// Rotation about y by beta, mapping z onto x at beta = pi/2.
Mat3 rotation_y(double beta);
/// u(alpha) a(beta): maps the pole onto the detector direction.
Mat3 detector_rotation(DetectorAngles angles);

/// Unit vector with polar angle gamma and azimuth psi.
inline Vec3 unit_vector(double gamma, double psi) {
    const double s = std::sin(gamma);
    return {std::cos(psi) * s, std::sin(psi) * s, std::cos(gamma)};
}

/// Radius of the torus labelled by scattering angle omega at polar angle gamma.
double radial_profile(double omega, double gamma, double R);

/// Torus point in the scattering-angle parametrization.
Vec3 torus_point_omega(double omega, DetectorAngles angles, double gamma, double psi, double R);

/// Torus point in the diameter parametrization, gamma in [0, pi].
Vec3 torus_point_p(double p, DetectorAngles angles, double gamma, double psi, double R);

/// Radius p cos(gamma - acos(R/p)) without domain checks.
inline double torus_radius_p(double p, double gamma, double R) {
    return p * std::cos(gamma - std::acos(R / p));
}

double omega_to_p(double omega, double R);
/// Obtuse (backscatter) solution of p = R / sin(omega).
double p_to_omega(double p, double R);

/// Scattered photon energy in keV, electron rest energy 511 keV.
double compton_energy(double omega, double E0_keV);

/// Radial nodes r_q = R + q (r_M_star - R) / M for q = 0..M.
std::vector<double> radial_nodes(double R, double r_M_star, int M);

/// Torus diameters p_j = r_j for j = 1..M (size M).
std::vector<double> p_grid(const ScanConfig& config);

}  // namespace cst
