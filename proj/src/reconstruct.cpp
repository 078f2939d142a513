#include "cst/reconstruct.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "cst/error.hpp"
#include "cst/parallel.hpp"

namespace cst {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

TikhonovSolver::TikhonovSolver(const Matrix& A, double lambda) : A_(&A) {
    if (A.rows() != A.cols()) throw ShapeError("tikhonov: matrix must be square");
    if (!(lambda >= 0)) throw DomainError("tikhonov: lambda must be >= 0");
    normal_ = A.transpose() * A;
    normal_.diagonal().array() += lambda;
    llt_.compute(normal_);
    bool singular = llt_.info() != Eigen::Success;
    if (!singular && lambda == 0.0 && A.rows() > 0) {
        const auto d = llt_.matrixLLT().diagonal().cwiseAbs();
        const double ratio = d.minCoeff() / d.maxCoeff();
        singular = ratio * ratio < std::numeric_limits<double>::epsilon() * static_cast<double>(A.rows());
    }
    if (singular) throw NumericalError("tikhonov: normal matrix is numerically singular");
}

Eigen::MatrixXd TikhonovSolver::solve(const Eigen::MatrixXd& g) const {
    if (g.rows() != A_->rows()) throw ShapeError("tikhonov: right-hand side length mismatch");
    return llt_.solve(A_->transpose() * g);
}

Eigen::VectorXd tikhonov_solve(const Matrix& A, const Eigen::VectorXd& g, double lambda) {
    return TikhonovSolver(A, lambda).solve(g);
}

HarmonicStack data_harmonics(const DataTensor& data, const SphereGrid& grid) {
    if (data.n_alpha() != static_cast<std::size_t>(grid.n_phi()) ||
        data.n_beta() != static_cast<std::size_t>(grid.n_theta()))
        throw ShapeError("data_harmonics: data angles do not match the sphere grid");
    HarmonicStack stack(grid.order(), static_cast<int>(data.n_p()));
    parallel_for(data.n_p(), [&](std::size_t j) { stack.set_shell(static_cast<int>(j), grid.forward(data.slab(j))); });
    return stack;
}

HarmonicStack solve_harmonics(const HarmonicStack& g, const KernelMatrixSet& matrices, double lambda,
                              std::vector<double>* normal_residuals, std::vector<double>* data_residuals) {
    const int N = g.order();
    const int M = g.n_radial();
    if (matrices.order() < N) throw ShapeError("solve_harmonics: not enough kernel matrices for the order");
    if (matrices.M != M) throw ShapeError("solve_harmonics: radial count does not match the matrices");
    HarmonicStack f(N, M);
    if (normal_residuals) normal_residuals->assign(packed_size(N), 0.0);
    if (data_residuals) data_residuals->assign(packed_size(N), 0.0);
    parallel_for(static_cast<std::size_t>(N + 1), [&](std::size_t degree) {
        const int l = static_cast<int>(degree);
        const Matrix& A = matrices.A[l];
        const TikhonovSolver solver(A, lambda);
        const int orders = 2 * l + 1;
        Eigen::MatrixXd rhs(M, 2 * orders);
        for (int m = -l; m <= l; ++m) {
            const auto col = g.radial(l, m);
            for (int i = 0; i < M; ++i) {
                rhs(i, 2 * (m + l)) = col[i].real();
                rhs(i, 2 * (m + l) + 1) = col[i].imag();
            }
        }
        const Eigen::MatrixXd sol = solver.solve(rhs);
        const Eigen::MatrixXd normal_res = solver.normal_matrix() * sol - A.transpose() * rhs;
        const Eigen::MatrixXd data_res = A * sol - rhs;
        for (int m = -l; m <= l; ++m) {
            auto out = f.radial(l, m);
            const int c = 2 * (m + l);
            for (int i = 0; i < M; ++i) out[i] = cplx(sol(i, c), sol(i, c + 1));
            const std::size_t lm = packed_index(l, m);
            if (normal_residuals) (*normal_residuals)[lm] = normal_res.middleCols(c, 2).norm();
            if (data_residuals) (*data_residuals)[lm] = data_res.middleCols(c, 2).norm();
        }
    });
    return f;
}

Volume spherical_to_cartesian(std::span<const double> field, std::span<const double> radii, const SphereGrid& grid,
                              const VolumeGeometry& target) {
    const std::size_t block = grid.n_samples();
    if (field.size() != block * radii.size()) throw ShapeError("spherical_to_cartesian: field size mismatch");
    Volume volume(target);
    if (radii.empty()) return volume;
    const int K = grid.n_theta(), P = grid.n_phi();

    // Polar axis extended by the two poles; ring means give the pole values.
    std::vector<double> theta(K + 2);
    theta.front() = 0.0;
    for (int k = 0; k < K; ++k) theta[k + 1] = grid.thetas()[k];
    theta.back() = pi;
    std::vector<double> pole_north(radii.size()), pole_south(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double north = 0, south = 0;
        for (int n = 0; n < P; ++n) {
            north += field[i * block + static_cast<std::size_t>(n) * K];
            south += field[i * block + static_cast<std::size_t>(n) * K + K - 1];
        }
        pole_north[i] = north / P;
        pole_south[i] = south / P;
    }
    auto shell_value = [&](std::size_t i, int n, int kk) {
        if (kk == 0) return pole_north[i];
        if (kk == K + 1) return pole_south[i];
        return field[i * block + static_cast<std::size_t>(n) * K + (kk - 1)];
    };

    const double r_lo = radii.front(), r_hi = radii.back();
    const double d_phi = 2 * pi / P;
    const auto& dims = target.dims;
    parallel_for(static_cast<std::size_t>(dims[2]), [&](std::size_t kz) {
        for (int jy = 0; jy < dims[1]; ++jy)
            for (int ix = 0; ix < dims[0]; ++ix) {
                const Vec3 x = target.center(ix, jy, static_cast<int>(kz));
                const double r = norm(x);
                if (!(r >= r_lo && r <= r_hi)) continue;
                // radial bracket
                std::size_t i0 = 0;
                double tr = 0;
                if (radii.size() > 1) {
                    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
                    std::size_t hi = static_cast<std::size_t>(it - radii.begin());
                    if (hi >= radii.size()) hi = radii.size() - 1;
                    i0 = hi - 1;
                    tr = (r - radii[i0]) / (radii[hi] - radii[i0]);
                }
                const std::size_t i1 = radii.size() > 1 ? i0 + 1 : i0;
                // polar bracket
                const double th = std::acos(std::clamp(x.z / r, -1.0, 1.0));
                const auto tit = std::upper_bound(theta.begin(), theta.end(), th);
                int k1 = static_cast<int>(tit - theta.begin());
                if (k1 > K + 1) k1 = K + 1;
                if (k1 < 1) k1 = 1;
                const int k0 = k1 - 1;
                const double tt = (th - theta[k0]) / (theta[k1] - theta[k0]);
                // azimuth bracket
                double ph = std::atan2(x.y, x.x);
                if (ph < 0) ph += 2 * pi;
                const double fp = ph / d_phi;
                int n0 = static_cast<int>(std::floor(fp));
                const double tp = fp - n0;
                n0 %= P;
                const int n1 = (n0 + 1) % P;

                double value = 0;
                for (int a = 0; a < 2; ++a) {
                    const std::size_t i = a ? i1 : i0;
                    const double wr = a ? tr : 1 - tr;
                    if (wr == 0) continue;
                    const double v00 = shell_value(i, n0, k0), v01 = shell_value(i, n1, k0);
                    const double v10 = shell_value(i, n0, k1), v11 = shell_value(i, n1, k1);
                    const double lower = (1 - tp) * v00 + tp * v01;
                    const double upper = (1 - tp) * v10 + tp * v11;
                    value += wr * ((1 - tt) * lower + tt * upper);
                }
                volume.at(ix, jy, static_cast<int>(kz)) = value;
            }
    });
    return volume;
}

ReconResult reconstruct(const DataTensor& data, const KernelMatrixSet& matrices, const ScanConfig& config,
                        const VolumeGeometry& target) {
    config.validate();
    if (data.n_p() != static_cast<std::size_t>(matrices.M))
        throw ShapeError("reconstruct: data has " + std::to_string(data.n_p()) + " diameters, matrices expect " +
                         std::to_string(matrices.M));
    for (std::size_t j = 0; j < data.n_p(); ++j)
        if (std::abs(data.p()[j] - matrices.p[j]) > 1e-12 * matrices.p[j])
            throw ShapeError("reconstruct: data p axis differs from the matrix grid");
    const SphereGrid grid(config.N, config.N_beta, config.theta_sampling);

    ReconResult result;
    result.lambda = config.lambda;
    auto start = Clock::now();
    const HarmonicStack g = data_harmonics(data, grid);
    result.timings.dsht_seconds = seconds_since(start);

    start = Clock::now();
    result.coefficients =
        solve_harmonics(g, matrices, config.lambda, &result.normal_residuals, &result.data_residuals);
    result.timings.solve_seconds = seconds_since(start);

    start = Clock::now();
    const std::size_t block = grid.n_samples();
    std::vector<double> field(block * static_cast<std::size_t>(matrices.M));
    parallel_for(static_cast<std::size_t>(matrices.M), [&](std::size_t i) {
        const auto values = grid.inverse_real(result.coefficients.shell(static_cast<int>(i)));
        std::copy(values.begin(), values.end(), field.begin() + static_cast<std::ptrdiff_t>(i * block));
    });
    result.timings.idsht_seconds = seconds_since(start);

    start = Clock::now();
    result.volume = spherical_to_cartesian(field, matrices.p, grid, target);
    result.timings.interpolate_seconds = seconds_since(start);
    return result;
}

}  // namespace cst
