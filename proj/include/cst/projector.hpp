#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "cst/geometry.hpp"
#include "cst/harmonics.hpp"
#include "cst/legendre.hpp"
#include "cst/parallel.hpp"
#include "cst/volume.hpp"

namespace cst {

enum class Interpolation { trilinear, nearest };

/// Axis-aligned box; rings of the torus that miss it are skipped.
struct Box {
    Vec3 lo, hi;

    double distance_to(Vec3 q) const {
        const double dx = std::max({lo.x - q.x, 0.0, q.x - hi.x});
        const double dy = std::max({lo.y - q.y, 0.0, q.y - hi.y});
        const double dz = std::max({lo.z - q.z, 0.0, q.z - hi.z});
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }
};

/// Empty data tensor with the acquisition axes of the configuration: p_j from
/// p_grid, alpha_n = 2 pi n / (2N + 1), beta_k the polar nodes of the sphere grid.
DataTensor make_data_tensor(const ScanConfig& config);

/// Trapezoidal nodes in gamma for one torus diameter, precomputed once and
/// shared by every detector direction.
struct TorusQuadrature {
    std::vector<double> axial;   // r cos(gamma)
    std::vector<double> radial;  // r sin(gamma)
    std::vector<double> weight;  // surface weight per node, psi step included

    TorusQuadrature(double p, double R, int N_gamma, int N_psi);
};

/// Psi tables shared by all tori.
struct PsiTable {
    std::vector<double> cos_psi, sin_psi;
    explicit PsiTable(int N_psi);
};

/// Trapezoidal surface integral of field over the torus of diameter p whose
/// axis points along detector_rotation(angles) * z, normalized as
/// (p^2 / R) cos(gamma - acos(R/p)) sin(gamma) dgamma dpsi over
/// gamma in [0, 2 acos(R/p)].
template <class Field>
double torus_integral(const Field& field, const TorusQuadrature& quad, const PsiTable& psi, const Mat3& rotation,
                      const std::optional<Box>& box, std::vector<Vec3>& scratch) {
    const Vec3 ex = rotation.column(0), ey = rotation.column(1), ez = rotation.column(2);
    const std::size_t n_psi = psi.cos_psi.size();
    scratch.resize(n_psi);
    for (std::size_t j = 0; j < n_psi; ++j) scratch[j] = psi.cos_psi[j] * ex + psi.sin_psi[j] * ey;
    double total = 0;
    for (std::size_t i = 0; i < quad.axial.size(); ++i) {
        if (quad.weight[i] == 0.0) continue;
        const Vec3 center = quad.axial[i] * ez;
        const double rho = quad.radial[i];
        if (box && box->distance_to(center) > rho) continue;
        double ring = 0;
        for (std::size_t j = 0; j < n_psi; ++j) {
            const Vec3& u = scratch[j];
            ring += field(Vec3{center.x + rho * u.x, center.y + rho * u.y, center.z + rho * u.z});
        }
        total += quad.weight[i] * ring;
    }
    return total;
}

/// Forward toric Radon transform of an arbitrary field on the acquisition grid.
template <class Field>
DataTensor project_field(const Field& field, const ScanConfig& config, const std::optional<Box>& box = {}) {
    config.validate();
    DataTensor data = make_data_tensor(config);
    const PsiTable psi(config.N_psi);
    const std::size_t n_alpha = data.n_alpha(), n_beta = data.n_beta();
    std::vector<Mat3> rotations(n_alpha * n_beta);
    for (std::size_t n = 0; n < n_alpha; ++n)
        for (std::size_t k = 0; k < n_beta; ++k)
            rotations[n * n_beta + k] = detector_rotation({data.alpha()[n], data.beta()[k]});
    parallel_for(data.n_p(), [&](std::size_t j) {
        const TorusQuadrature quad(data.p()[j], config.R, config.N_gamma, config.N_psi);
        std::vector<Vec3> scratch;
        for (std::size_t nk = 0; nk < n_alpha * n_beta; ++nk)
            data.values()[j * n_alpha * n_beta + nk] = torus_integral(field, quad, psi, rotations[nk], box, scratch);
    });
    return data;
}

/// Forward projection of a voxel volume.
DataTensor project(const Volume& volume, const ScanConfig& config,
                   Interpolation interpolation = Interpolation::trilinear);

/// Single torus in the scattering-angle parametrization: trapezoidal rule over
/// gamma in [0, 2 omega - pi] (step (omega - pi/2) / N_gamma) and psi in
/// [0, 2 pi) with weight r(gamma) sin(gamma) / sin(omega).
template <class Field>
double project_omega_field(const Field& field, double omega, DetectorAngles angles, const ScanConfig& config) {
    const double R = config.R;
    const double top = 2 * omega - pi;
    const int n_gamma = 2 * config.N_gamma;
    const double d_gamma = (omega - pi / 2) / config.N_gamma;
    const double d_psi = 2 * pi / config.N_psi;
    const Mat3 rotation = detector_rotation(angles);
    const double sin_omega = std::sin(omega);
    double total = 0;
    for (int i = 0; i <= n_gamma; ++i) {
        const double gamma = i == n_gamma ? top : i * d_gamma;
        const double r = radial_profile(omega, gamma, R);
        const double end = (i == 0 || i == n_gamma) ? 0.5 : 1.0;
        double ring = 0;
        for (int j = 0; j < config.N_psi; ++j)
            ring += field(r * (rotation * unit_vector(gamma, j * d_psi)));
        total += end * r * std::sin(gamma) / sin_omega * ring;
    }
    return total * d_gamma * d_psi;
}

double project_omega(const Volume& volume, double omega, DetectorAngles angles, const ScanConfig& config);

/// Split points in gamma, in [lo, hi], where r(gamma) crosses one of the radii.
std::vector<double> gamma_breaks(double p, double R, double lo, double hi, std::span<const double> radii);

/// Data coefficient (R_T f)_{lm}(p) from the radial coefficient f_lm through
/// 2 pi int r(gamma) sin(gamma)/sin(omega) f_lm(r(gamma)) P_l(cos gamma) dgamma,
/// by composite Gauss-Legendre quadrature split at the torus apex and at the
/// gamma values where r(gamma) meets one of `breakpoints` (kinks or jumps of f_lm).
template <class RadialFn>
auto coeff_forward_1d(const RadialFn& f_lm, int l, std::span<const double> p_values, double R, int panels = 256,
                      std::span<const double> breakpoints = {}) -> std::vector<decltype(f_lm(1.0) * 1.0)> {
    using Value = decltype(f_lm(1.0) * 1.0);
    const QuadratureRule unit = gauss_legendre(8, 0.0, 1.0);
    std::vector<Value> out(p_values.size(), Value{});
    for (std::size_t j = 0; j < p_values.size(); ++j) {
        const double p = p_values[j];
        const double omega = pi - std::asin(R / p);
        const double apex = omega - pi / 2;
        const double sin_omega = R / p;
        Value sum{};
        for (int half = 0; half < 2; ++half) {
            const auto cuts = gamma_breaks(p, R, half * apex, (half + 1) * apex, breakpoints);
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                const double a = cuts[s], len = cuts[s + 1] - cuts[s];
                if (!(len > 0)) continue;
                const int n = std::max(1, static_cast<int>(std::ceil(panels * len / apex)));
                const double h = len / n;
                for (int panel = 0; panel < n; ++panel)
                    for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
                        const double gamma = a + h * (panel + unit.nodes[q]);
                        const double r = R * std::sin(omega - gamma) / sin_omega;
                        sum += (h * unit.weights[q] * r * std::sin(gamma) / sin_omega *
                                legendre(l, std::cos(gamma))) *
                               f_lm(r);
                    }
            }
        }
        out[j] = 2 * pi * sum;
    }
    return out;
}

/// Sampled variant: f_lm is linearly interpolated between the given radii and
/// zero outside them; the radii serve as breakpoints.
std::vector<cplx> coeff_forward_1d(std::span<const double> radii, std::span<const cplx> f_lm, int l,
                                   std::span<const double> p_values, double R, int panels = 256);

}  // namespace cst
