#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cst/geometry.hpp"
#include "cst/harmonics.hpp"
#include "cst/system.hpp"
#include "cst/volume.hpp"

namespace cst {

/// Cholesky factorization of A^T A + lambda I, reusable across right-hand sides.
class TikhonovSolver {
  public:
    TikhonovSolver(const Matrix& A, double lambda);

    /// Solves (A^T A + lambda I) f = A^T g for each column of g.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& g) const;

    const Eigen::MatrixXd& normal_matrix() const { return normal_; }

  private:
    const Matrix* A_;
    Eigen::MatrixXd normal_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// (A^T A + lambda I) f = A^T g. Throws NumericalError only for lambda = 0 with
/// a numerically singular A^T A.
Eigen::VectorXd tikhonov_solve(const Matrix& A, const Eigen::VectorXd& g, double lambda);

struct StageTimings {
    double dsht_seconds = 0;
    double solve_seconds = 0;
    double idsht_seconds = 0;
    double interpolate_seconds = 0;
};

struct ReconResult {
    Volume volume;
    HarmonicStack coefficients;            // f_lm at r_1..r_M
    std::vector<double> normal_residuals;  // |(A^T A + lambda I) f - A^T g| per packed (l, m)
    std::vector<double> data_residuals;    // |A f - g| per packed (l, m)
    double lambda = 0;
    StageTimings timings;
};

/// Data coefficients g_lm(p_j) by one DSHT per diameter.
HarmonicStack data_harmonics(const DataTensor& data, const SphereGrid& grid);

/// Per-(l, m) regularized solves, one factorization per degree.
HarmonicStack solve_harmonics(const HarmonicStack& data_coefficients, const KernelMatrixSet& matrices, double lambda,
                              std::vector<double>* normal_residuals = nullptr,
                              std::vector<double>* data_residuals = nullptr);

/// Trilinear interpolation in (r, theta, phi) of a field sampled at radii[i]
/// on the sphere grid (layout [i][n][k]). Voxels outside [radii.front(),
/// radii.back()] are zero; the poles take the mean of the nearest ring.
Volume spherical_to_cartesian(std::span<const double> field, std::span<const double> radii, const SphereGrid& grid,
                              const VolumeGeometry& target);

/// DSHT of data, Tikhonov solves, IDSHT on r_1..r_M, Cartesian interpolation.
ReconResult reconstruct(const DataTensor& data, const KernelMatrixSet& matrices, const ScanConfig& config,
                        const VolumeGeometry& target);

}  // namespace cst
