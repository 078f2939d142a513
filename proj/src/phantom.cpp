#include "cst/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cst/error.hpp"
#include "cst/parallel.hpp"

namespace cst {

namespace {

double component(const Vec3& v, int axis) {
    return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
}

double max_square(const Volume& f) {
    double m = 0;
    for (double v : f.values()) m = std::max(m, v * v);
    return m;
}

void check_pair(const Volume& f, const Volume& g) {
    if (f.geometry().dims != g.geometry().dims) throw ShapeError("metrics: volume dimensions differ");
}

}  // namespace

PhantomSpec default_phantom(int n, double R) {
    if (n < 1) throw ConfigError("phantom: grid size must be positive");
    PhantomSpec spec;
    const double L = 1.0, h = L / n;
    spec.geometry.dims = {n, n, n};
    spec.geometry.origin = {h, h, R};
    spec.geometry.spacing = {h, h, h};
    spec.balls.push_back({{0.55, 0.5, 0.6}, 0.32, 0.4});
    spec.balls.push_back({{0.6, 0.55, 0.7}, 0.13, 0.6});
    Crack crack;
    crack.ball = 0;
    crack.axis = 0;
    crack.position = 0.35;
    crack.thickness = 0.06;
    crack.range_axis = 2;
    crack.range_lo = 0.45;
    crack.range_hi = 0.75;
    spec.crack = crack;
    return spec;
}

Volume make_phantom(const PhantomSpec& spec) {
    Volume volume(spec.geometry);
    if (spec.crack) {
        const Crack& c = *spec.crack;
        if (c.ball < 0 || static_cast<std::size_t>(c.ball) >= spec.balls.size())
            throw ConfigError("phantom: crack refers to a missing ball");
        if (c.axis < 0 || c.axis > 2 || c.range_axis < 0 || c.range_axis > 2)
            throw ConfigError("phantom: crack axis must be 0, 1 or 2");
    }
    for (const Ball& b : spec.balls)
        if (!(b.radius >= 0)) throw ConfigError("phantom: ball radius must be >= 0");
    const auto& d = spec.geometry.dims;
    for (int k = 0; k < d[2]; ++k)
        for (int j = 0; j < d[1]; ++j)
            for (int i = 0; i < d[0]; ++i) {
                const Vec3 x = spec.geometry.center(i, j, k);
                double value = 0;
                for (const Ball& b : spec.balls)
                    if (norm(x - b.center) <= b.radius) value += b.intensity;
                if (spec.crack) {
                    const Crack& c = *spec.crack;
                    const Ball& b = spec.balls[c.ball];
                    const double s = component(x, c.range_axis);
                    if (norm(x - b.center) <= b.radius && std::abs(component(x, c.axis) - c.position) <= c.thickness / 2 &&
                        s >= c.range_lo && s <= c.range_hi)
                        value = c.background;
                }
                volume.at(i, j, k) = value;
            }
    return volume;
}

bool support_below(const Volume& volume, double r_m) {
    const auto& g = volume.geometry();
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i)
                if (volume.at(i, j, k) != 0.0 && norm(g.center(i, j, k)) < r_m) return true;
    return false;
}

double epsilon_for_snr(double snr_db) { return 100.0 * std::pow(10.0, -snr_db / 20.0); }

NoisyData add_noise(const DataTensor& data, const NoiseSpec& spec) {
    if (std::isnan(spec.snr_db)) throw ConfigError("noise: snr_db is NaN");
    double signal = 0;
    for (double v : data.values()) signal += v * v;
    if (signal == 0.0) throw DomainError("noise: SNR is undefined for all-zero data");
    NoisyData out{data, 0.0};
    if (std::isinf(spec.snr_db) && spec.snr_db > 0) return out;

    std::mt19937_64 engine(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noise(data.values().size());
    double energy = 0;
    for (double& v : noise) {
        v = normal(engine);
        energy += v * v;
    }
    const double target = signal * std::pow(10.0, -spec.snr_db / 10.0);
    const double scale = std::sqrt(target / energy);
    auto& values = out.data.values();
    double diff = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double before = values[i];
        values[i] += scale * noise[i];
        diff += (values[i] - before) * (values[i] - before);
    }
    out.epsilon_percent = 100.0 * std::sqrt(diff / signal);
    return out;
}

double nmse(const Volume& f, const Volume& f_tilde) {
    check_pair(f, f_tilde);
    const double peak = max_square(f);
    if (peak == 0.0) throw DomainError("nmse: reference volume is identically zero");
    double sum = 0;
    const auto& a = f.values();
    const auto& b = f_tilde.values();
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return 100.0 * sum / (static_cast<double>(a.size()) * peak);
}

double nmae(const Volume& f, const Volume& f_tilde) {
    check_pair(f, f_tilde);
    const double peak = std::sqrt(max_square(f));
    if (peak == 0.0) throw DomainError("nmae: reference volume is identically zero");
    double sum = 0;
    const auto& a = f.values();
    const auto& b = f_tilde.values();
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return 100.0 * sum / (static_cast<double>(a.size()) * peak);
}

std::vector<double> sample_spherical(const Volume& volume, std::span<const double> radii, const SphereGrid& grid) {
    const int K = grid.n_theta(), P = grid.n_phi();
    const std::size_t block = grid.n_samples();
    std::vector<double> field(block * radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        for (int n = 0; n < P; ++n)
            for (int k = 0; k < K; ++k) {
                const Vec3 x = radii[i] * unit_vector(grid.thetas()[k], grid.phi(n));
                field[i * block + static_cast<std::size_t>(n) * K + k] = volume.sample_trilinear(x);
            }
    });
    return field;
}

}  // namespace cst
