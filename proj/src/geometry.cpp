#include "cst/geometry.hpp"

#include <string>

#include "cst/error.hpp"

namespace cst {

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Mat3 Mat3::transposed() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
}

double Mat3::determinant() const {
    const auto& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

void ScanConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("scan: " + what); };
    if (!(R > 0)) fail("R must be positive");
    if (!(R < r_m)) fail("r_m must exceed R");
    if (!(r_m <= r_M)) fail("r_m must not exceed r_M");
    if (!(r_M <= r_M_star)) fail("r_M must not exceed r_M_star");
    if (N < 1) fail("N must be >= 1");
    if (N_alpha != 2 * N + 1) fail("N_alpha must equal 2N + 1");
    if (N_beta < 1 || N_p < 1 || N_r < 1 || N_gamma < 1 || N_psi < 1)
        fail("grid counts must be >= 1");
    if (N_r != N_p) fail("N_r must equal N_p (square product-integration system)");
    if (!(lambda >= 0)) fail("lambda must be >= 0");
}

Vec3 detector_position(DetectorAngles angles, double R) {
    return R * unit_vector(angles.beta, angles.alpha);
}

Mat3 rotation_z(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Mat3 rotation_y(double beta) {
    const double c = std::cos(beta), s = std::sin(beta);
    return {{c, 0, s, 0, 1, 0, -s, 0, c}};
}

Mat3 detector_rotation(DetectorAngles angles) {
    return rotation_z(angles.alpha) * rotation_y(angles.beta);
}

double radial_profile(double omega, double gamma, double R) {
    if (!(omega > pi / 2 && omega < pi))
        throw DomainError("radial_profile: omega must lie in (pi/2, pi)");
    const double top = 2 * omega - pi;
    if (!(gamma >= 0 && gamma <= top))
        throw DomainError("radial_profile: gamma must lie in [0, 2 omega - pi]");
    return R * std::sin(omega - gamma) / std::sin(omega);
}

Vec3 torus_point_omega(double omega, DetectorAngles angles, double gamma, double psi, double R) {
    const double r = radial_profile(omega, gamma, R);
    return r * (detector_rotation(angles) * unit_vector(gamma, psi));
}

Vec3 torus_point_p(double p, DetectorAngles angles, double gamma, double psi, double R) {
    if (!(p > R)) throw DomainError("torus_point_p: p must exceed R");
    if (!(gamma >= 0 && gamma <= pi)) throw DomainError("torus_point_p: gamma must lie in [0, pi]");
    return torus_radius_p(p, gamma, R) * (detector_rotation(angles) * unit_vector(gamma, psi));
}

double omega_to_p(double omega, double R) {
    if (!(omega > pi / 2 && omega < pi)) throw DomainError("omega_to_p: omega must lie in (pi/2, pi)");
    return R / std::sin(omega);
}

double p_to_omega(double p, double R) {
    if (!(p > R)) throw DomainError("p_to_omega: p must exceed R");
    return pi - std::asin(R / p);
}

double compton_energy(double omega, double E0_keV) {
    constexpr double electron_rest_keV = 511.0;
    return E0_keV / (1.0 + (E0_keV / electron_rest_keV) * (1.0 - std::cos(omega)));
}

std::vector<double> radial_nodes(double R, double r_M_star, int M) {
    std::vector<double> r(static_cast<std::size_t>(M) + 1);
    const double step = (r_M_star - R) / M;
    for (int q = 0; q <= M; ++q) r[q] = R + q * step;
    r[M] = r_M_star;
    return r;
}

std::vector<double> p_grid(const ScanConfig& config) {
    auto r = radial_nodes(config.R, config.r_M_star, config.N_p);
    return {r.begin() + 1, r.end()};
}

}  // namespace cst
