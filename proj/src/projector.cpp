#include "cst/projector.hpp"

#include <algorithm>

#include "cst/error.hpp"

namespace cst {

DataTensor make_data_tensor(const ScanConfig& config) {
    auto p = p_grid(config);
    if (!(p.front() > config.R)) throw ConfigError("project: p grid must lie above R");
    std::vector<double> alpha(config.N_alpha);
    for (int n = 0; n < config.N_alpha; ++n) alpha[n] = 2.0 * pi * n / config.N_alpha;
    const SphereGrid grid(0, config.N_beta, config.theta_sampling);
    return DataTensor(std::move(p), std::move(alpha), grid.thetas());
}

TorusQuadrature::TorusQuadrature(double p, double R, int N_gamma, int N_psi) {
    if (!(p > R)) throw DomainError("TorusQuadrature: p must exceed R");
    const double half_range = std::acos(R / p);
    const double step = half_range / N_gamma;
    const double d_psi = 2 * pi / N_psi;
    const int count = 2 * N_gamma + 1;
    axial.resize(count);
    radial.resize(count);
    weight.resize(count);
    for (int i = 0; i < count; ++i) {
        const double gamma = i == count - 1 ? 2 * half_range : i * step;
        const double c = std::cos(gamma - half_range);
        const double r = p * c;
        axial[i] = r * std::cos(gamma);
        radial[i] = r * std::sin(gamma);
        const double end = (i == 0 || i == count - 1) ? 0.5 : 1.0;
        weight[i] = end * step * d_psi * (p * p / R) * c * std::sin(gamma);
    }
}

PsiTable::PsiTable(int N_psi) : cos_psi(N_psi), sin_psi(N_psi) {
    for (int j = 0; j < N_psi; ++j) {
        cos_psi[j] = std::cos(2 * pi * j / N_psi);
        sin_psi[j] = std::sin(2 * pi * j / N_psi);
    }
}

DataTensor project(const Volume& volume, const ScanConfig& config, Interpolation interpolation) {
    const auto [lo, hi] = volume.support_box();
    const Box box{lo, hi};
    if (interpolation == Interpolation::nearest)
        return project_field([&](Vec3 x) { return volume.sample_nearest(x); }, config, box);
    return project_field([&](Vec3 x) { return volume.sample_trilinear(x); }, config, box);
}

double project_omega(const Volume& volume, double omega, DetectorAngles angles, const ScanConfig& config) {
    if (!(omega > pi / 2 && omega < pi)) throw DomainError("project_omega: omega must lie in (pi/2, pi)");
    return project_omega_field([&](Vec3 x) { return volume.sample_trilinear(x); }, omega, angles, config);
}

std::vector<cplx> coeff_forward_1d(std::span<const double> radii, std::span<const cplx> f_lm, int l,
                                   std::span<const double> p_values, double R, int panels) {
    if (radii.size() != f_lm.size() || radii.empty())
        throw ShapeError("coeff_forward_1d: radii and samples must have equal, nonzero length");
    auto interpolate = [&](double r) -> cplx {
        if (r < radii.front() || r > radii.back()) return 0.0;
        const auto it = std::upper_bound(radii.begin(), radii.end(), r);
        if (it == radii.end()) return f_lm.back();
        const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
        const std::size_t lo = hi - 1;
        const double t = (r - radii[lo]) / (radii[hi] - radii[lo]);
        return (1 - t) * f_lm[lo] + t * f_lm[hi];
    };
    return coeff_forward_1d(interpolate, l, p_values, R, panels, radii);
}

std::vector<double> gamma_breaks(double p, double R, double lo, double hi, std::span<const double> radii) {
    const double omega = pi - std::asin(R / p);
    std::vector<double> cuts{lo, hi};
    for (double rho : radii) {
        if (!(rho > R && rho < p)) continue;
        const double s = std::asin(rho / p);
        for (double g : {omega - pi + s, omega - s})
            if (g > lo && g < hi) cuts.push_back(g);
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

}  // namespace cst
