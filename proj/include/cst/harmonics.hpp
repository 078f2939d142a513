#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cst/geometry.hpp"

namespace cst {

using cplx = std::complex<double>;

struct HarmonicIndex {
    int l = 0;
    int m = 0;
};

/// Position of (l, m) in the triangular packing l^2 + l + m.
constexpr std::size_t packed_index(int l, int m) {
    return static_cast<std::size_t>(l * l + l + m);
}
constexpr std::size_t packed_size(int N) { return static_cast<std::size_t>((N + 1) * (N + 1)); }

/// Normalization q_l^m = (-1)^m sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!), |m| <= l.
double qlm(int l, int m);

/// Orthonormal spherical harmonic q_l^m P_l^m(cos gamma) e^{i m psi} with the
/// Condon-Shortley factor inside P_l^m; Y_{l,-m} = (-1)^m conj(Y_{l,m}).
cplx ylm(HarmonicIndex index, double gamma, double psi);

/// Sampling of the unit sphere: polar nodes theta_k (t_k = cos theta_k) with
/// weights w_k in t, and 2N + 1 uniform azimuths phi_n = 2 pi n / (2N + 1).
///
/// Grid samples are stored azimuth-major: value(n, k) at n * n_theta() + k.
/// Coefficients are packed by packed_index.
class SphereGrid {
  public:
    SphereGrid(int N, int n_theta, ThetaSampling sampling = ThetaSampling::gauss_legendre);

    int order() const { return N_; }
    int n_theta() const { return static_cast<int>(theta_.size()); }
    int n_phi() const { return 2 * N_ + 1; }
    std::size_t n_samples() const { return theta_.size() * static_cast<std::size_t>(n_phi()); }
    std::size_t n_coefficients() const { return packed_size(N_); }
    ThetaSampling sampling() const { return sampling_; }

    const std::vector<double>& thetas() const { return theta_; }
    const std::vector<double>& nodes() const { return t_; }
    const std::vector<double>& weights() const { return w_; }
    double phi(int n) const;

    /// q_l^m P_l^m(t_k) for m >= 0.
    double normalized_legendre(int l, int m, int k) const {
        return plm_[row_offset(m, l) * theta_.size() + k];
    }

    /// Values at t_k -> coefficients over l = |m|..N (2 pi sum_k w_k v_k q P).
    std::vector<cplx> dlt(int m, std::span<const cplx> values) const;
    /// Coefficients over l = |m|..N -> values at t_k.
    std::vector<cplx> idlt(int m, std::span<const cplx> coefficients) const;

    /// Real grid samples -> packed coefficients.
    std::vector<cplx> forward(std::span<const double> samples) const;
    /// Complex grid samples -> packed coefficients.
    std::vector<cplx> forward(std::span<const cplx> samples) const;
    /// Packed coefficients -> complex grid samples.
    std::vector<cplx> inverse(std::span<const cplx> coefficients) const;
    /// Packed coefficients of a real field -> real grid samples. Uses only
    /// m >= 0 and assumes c_{l,-m} = (-1)^m conj(c_{l,m}).
    std::vector<double> inverse_real(std::span<const cplx> coefficients) const;

  private:
    std::size_t row_offset(int m, int l) const {
        // rows for m = 0..N, each holding l = m..N
        const std::size_t before = static_cast<std::size_t>(m) * (N_ + 1) -
                                   static_cast<std::size_t>(m) * (m - 1) / 2;
        return before + static_cast<std::size_t>(l - m);
    }
    void check_samples(std::size_t size) const;
    void check_coefficients(std::size_t size) const;

    int N_;
    ThetaSampling sampling_;
    std::vector<double> theta_, t_, w_;
    std::vector<double> plm_;
    std::vector<double> cos_table_, sin_table_;  // cos(2 pi j / (2N+1))
};

/// Coefficients c[l][m][i] of a function of (radius, direction) for l <= N.
class HarmonicStack {
  public:
    HarmonicStack() = default;
    HarmonicStack(int N, int n_radial);

    int order() const { return N_; }
    int n_radial() const { return n_radial_; }

    cplx& at(int l, int m, int i) { return data_[offset(l, m, i)]; }
    const cplx& at(int l, int m, int i) const { return data_[offset(l, m, i)]; }

    /// Radial profile of one (l, m), contiguous.
    std::span<cplx> radial(int l, int m) {
        return {data_.data() + offset(l, m, 0), static_cast<std::size_t>(n_radial_)};
    }
    std::span<const cplx> radial(int l, int m) const {
        return {data_.data() + offset(l, m, 0), static_cast<std::size_t>(n_radial_)};
    }

    /// Packed coefficients at one radial index.
    std::vector<cplx> shell(int i) const;
    void set_shell(int i, std::span<const cplx> packed);

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

  private:
    std::size_t offset(int l, int m, int i) const {
        return packed_index(l, m) * static_cast<std::size_t>(n_radial_) + static_cast<std::size_t>(i);
    }
    int N_ = 0;
    int n_radial_ = 0;
    std::vector<cplx> data_;
};

/// One DSHT per radial index. samples holds n_radial blocks of grid.n_samples().
HarmonicStack dsht(const SphereGrid& grid, std::span<const double> samples, int n_radial);
/// Inverse of dsht for real fields.
std::vector<double> idsht(const SphereGrid& grid, const HarmonicStack& stack);

}  // namespace cst
