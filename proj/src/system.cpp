#include "cst/system.hpp"

#include <algorithm>
#include <cmath>

#include "cst/error.hpp"
#include "cst/io.hpp"
#include "cst/kernel.hpp"
#include "cst/parallel.hpp"

namespace cst {

double weight(int j, int q, std::span<const double> p_grid, std::span<const double> r_grid) {
    if (j < q) return 0.0;
    if (q < 1 || j < 1 || static_cast<std::size_t>(j) > p_grid.size() || static_cast<std::size_t>(q) >= r_grid.size())
        throw DomainError("weight: index out of range");
    const double p = p_grid[j - 1];
    const double lo = r_grid[q - 1], hi = std::min(r_grid[q], p);
    return std::sqrt(std::max(0.0, p * p - lo * lo)) - std::sqrt(std::max(0.0, p * p - hi * hi));
}

double cell_average(const std::function<double(double)>& fn, double a, double b, int points) {
    if (points < 2) return fn(0.5 * (a + b));
    double sum = 0;
    for (int i = 0; i < points; ++i) {
        const double x = i == points - 1 ? b : a + i * (b - a) / (points - 1);
        sum += fn(x);
    }
    return sum / points;
}

double reduced_kernel(int l, double p, double r, double R) {
    return std::sqrt(p + r) * kernel_direct({p, r, l}, R) / r;
}

namespace {

double averaged_kernel_on(int l, double p, double a, double b, double R) {
    if (a < R) throw DomainError("averaged_kernel: sample point below R");
    return cell_average([&](double r) { return reduced_kernel(l, p, r, R); }, a, b);
}

}  // namespace

double averaged_kernel(int l, int j, int q, const ScanConfig& config) {
    if (q < 1 || q > j || j > config.N_p) throw DomainError("averaged_kernel: need 1 <= q <= j <= M");
    const auto r = radial_nodes(config.R, config.r_M_star, config.N_p);
    return averaged_kernel_on(l, r[j], r[q - 1], r[q], config.R);
}

Matrix assemble(int l, const ScanConfig& config) {
    const int M = config.N_p;
    const auto r = radial_nodes(config.R, config.r_M_star, M);
    const std::span<const double> p(r.data() + 1, static_cast<std::size_t>(M));
    Matrix A = Matrix::Zero(M, M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t row) {
        const int j = static_cast<int>(row) + 1;
        for (int q = 1; q <= j; ++q)
            A(j - 1, q - 1) = weight(j, q, p, r) * averaged_kernel_on(l, p[j - 1], r[q - 1], r[q], config.R);
    });
    return A;
}

KernelMatrixSet assemble_all(const ScanConfig& config, const std::optional<std::filesystem::path>& cache_dir) {
    KernelMatrixSet set;
    set.R = config.R;
    set.r_M_star = config.r_M_star;
    set.M = config.N_p;
    set.r = radial_nodes(config.R, config.r_M_star, config.N_p);
    set.p.assign(set.r.begin() + 1, set.r.end());
    set.A.resize(config.N + 1);
    const MatrixKey base{config.R, config.N_p, config.r_M_star, 0};
    for (int l = 0; l <= config.N; ++l) {
        MatrixKey key = base;
        key.l = l;
        if (cache_dir) {
            const auto path = *cache_dir / matrix_cache_name(key);
            if (std::filesystem::exists(path)) {
                set.A[l] = read_matrix(path, key);
                continue;
            }
        }
        set.A[l] = assemble(l, config);
        if (cache_dir) {
            std::filesystem::create_directories(*cache_dir);
            write_matrix(*cache_dir / matrix_cache_name(key), key, set.A[l]);
        }
    }
    return set;
}

}  // namespace cst
