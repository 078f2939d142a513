#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cst/geometry.hpp"

namespace cst {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Lower-triangular product-integration matrices A_0..A_N on the radial grid
/// r_q = R + q (r_M_star - R) / M with torus diameters p_j = r_j.
struct KernelMatrixSet {
    double R = 0;
    double r_M_star = 0;
    int M = 0;
    std::vector<double> r;  // r_0..r_M
    std::vector<double> p;  // p_1..p_M
    std::vector<Matrix> A;  // indexed by l

    int order() const { return static_cast<int>(A.size()) - 1; }
};

/// Exact integral of r / sqrt(p_j^2 - r^2) over [r_{q-1}, r_q] (1-based j, q);
/// zero when j < q. r_grid holds r_0..r_M, p_grid holds p_1..p_M.
double weight(int j, int q, std::span<const double> p_grid, std::span<const double> r_grid);

/// Mean of fn over `points` equidistant samples of [a, b], endpoints included.
double cell_average(const std::function<double(double)>& fn, double a, double b, int points = 10);

/// sqrt(p + r) K_l(p, r) / r.
double reduced_kernel(int l, double p, double r, double R);

/// Average of the reduced kernel at p_j over the cell [r_{q-1}, r_q].
double averaged_kernel(int l, int j, int q, const ScanConfig& config);

/// A_l with entries w_{j,q} times the averaged reduced kernel.
Matrix assemble(int l, const ScanConfig& config);

/// All N + 1 matrices. With a cache directory, matrices are loaded from
/// (or stored to) files keyed by (R, M, r_M_star, l).
KernelMatrixSet assemble_all(const ScanConfig& config, const std::optional<std::filesystem::path>& cache_dir = {});

}  // namespace cst
