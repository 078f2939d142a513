#include "cst/harmonics.hpp"

#include <cmath>
#include <string>

#include "cst/error.hpp"
#include "cst/legendre.hpp"

namespace cst {

namespace {

double sign_of_order(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double qlm(int l, int m) {
    if (std::abs(m) > l) throw DomainError("qlm: need |m| <= l");
    const double ratio = std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
    return sign_of_order(m) * std::sqrt((2.0 * l + 1.0) / (4.0 * pi) * ratio);
}

cplx ylm(HarmonicIndex index, double gamma, double psi) {
    const int l = index.l, am = std::abs(index.m);
    if (l < 0 || am > l) throw DomainError("ylm: need |m| <= l");
    const double value = normalized_legendre(am, l, std::cos(gamma)).back();
    const cplx y = std::polar(value, am * psi);
    if (index.m >= 0) return y;
    return sign_of_order(am) * std::conj(y);
}

SphereGrid::SphereGrid(int N, int n_theta, ThetaSampling sampling) : N_(N), sampling_(sampling) {
    if (N < 0) throw DomainError("SphereGrid: N must be >= 0");
    if (n_theta < 1) throw DomainError("SphereGrid: need at least one polar node");
    theta_.resize(n_theta);
    t_.resize(n_theta);
    w_.resize(n_theta);
    if (sampling == ThetaSampling::gauss_legendre) {
        QuadratureRule rule = gauss_legendre(n_theta);
        for (int k = 0; k < n_theta; ++k) {
            t_[k] = rule.nodes[k];
            w_[k] = rule.weights[k];
            theta_[k] = std::acos(t_[k]);
        }
    } else {
        const double step = pi / n_theta;
        for (int k = 0; k < n_theta; ++k) {
            theta_[k] = (k + 0.5) * step;
            t_[k] = std::cos(theta_[k]);
            w_[k] = step * std::sin(theta_[k]);
        }
    }

    const std::size_t rows = static_cast<std::size_t>(N + 1) * (N + 2) / 2;
    plm_.assign(rows * n_theta, 0.0);
    for (int k = 0; k < n_theta; ++k)
        for (int m = 0; m <= N; ++m) {
            const auto column = cst::normalized_legendre(m, N, t_[k]);
            for (int l = m; l <= N; ++l) plm_[row_offset(m, l) * n_theta + k] = column[l - m];
        }

    const int P = n_phi();
    cos_table_.resize(P);
    sin_table_.resize(P);
    for (int j = 0; j < P; ++j) {
        cos_table_[j] = std::cos(2.0 * pi * j / P);
        sin_table_[j] = std::sin(2.0 * pi * j / P);
    }
}

double SphereGrid::phi(int n) const { return 2.0 * pi * n / n_phi(); }

void SphereGrid::check_samples(std::size_t size) const {
    if (size != n_samples())
        throw ShapeError("SphereGrid: expected " + std::to_string(n_samples()) + " grid samples, got " +
                         std::to_string(size));
}

void SphereGrid::check_coefficients(std::size_t size) const {
    if (size != n_coefficients())
        throw ShapeError("SphereGrid: expected " + std::to_string(n_coefficients()) +
                         " coefficients, got " + std::to_string(size));
}

std::vector<cplx> SphereGrid::dlt(int m, std::span<const cplx> values) const {
    const int am = std::abs(m);
    if (am > N_) throw DomainError("dlt: |m| exceeds the expansion order");
    if (values.size() != theta_.size()) throw ShapeError("dlt: one value per polar node required");
    const double phase = m < 0 ? sign_of_order(am) : 1.0;
    std::vector<cplx> out(N_ - am + 1);
    const std::size_t K = theta_.size();
    for (int l = am; l <= N_; ++l) {
        const double* row = plm_.data() + row_offset(am, l) * K;
        cplx sum = 0;
        for (std::size_t k = 0; k < K; ++k) sum += (w_[k] * row[k]) * values[k];
        out[l - am] = 2.0 * pi * phase * sum;
    }
    return out;
}

std::vector<cplx> SphereGrid::idlt(int m, std::span<const cplx> coefficients) const {
    const int am = std::abs(m);
    if (am > N_) throw DomainError("idlt: |m| exceeds the expansion order");
    if (coefficients.size() != static_cast<std::size_t>(N_ - am + 1))
        throw ShapeError("idlt: one coefficient per degree l = |m|..N required");
    const double phase = m < 0 ? sign_of_order(am) : 1.0;
    const std::size_t K = theta_.size();
    std::vector<cplx> out(K, 0.0);
    for (int l = am; l <= N_; ++l) {
        const double* row = plm_.data() + row_offset(am, l) * K;
        const cplx c = phase * coefficients[l - am];
        for (std::size_t k = 0; k < K; ++k) out[k] += c * row[k];
    }
    return out;
}

std::vector<cplx> SphereGrid::forward(std::span<const double> samples) const {
    check_samples(samples.size());
    const int P = n_phi();
    const std::size_t K = theta_.size();
    std::vector<cplx> coeffs(n_coefficients());
    std::vector<cplx> column(K);
    for (int m = 0; m <= N_; ++m) {
        for (std::size_t k = 0; k < K; ++k) {
            double re = 0, im = 0;
            int idx = 0;
            for (int n = 0; n < P; ++n) {
                const double v = samples[static_cast<std::size_t>(n) * K + k];
                re += v * cos_table_[idx];
                im -= v * sin_table_[idx];
                idx += m;
                if (idx >= P) idx -= P;
            }
            column[k] = cplx(re, im) / static_cast<double>(P);
        }
        const auto c = dlt(m, column);
        for (int l = m; l <= N_; ++l) {
            coeffs[packed_index(l, m)] = c[l - m];
            if (m > 0) coeffs[packed_index(l, -m)] = sign_of_order(m) * std::conj(c[l - m]);
        }
    }
    return coeffs;
}

std::vector<cplx> SphereGrid::forward(std::span<const cplx> samples) const {
    check_samples(samples.size());
    const int P = n_phi();
    const std::size_t K = theta_.size();
    std::vector<cplx> coeffs(n_coefficients());
    std::vector<cplx> column(K);
    for (int m = -N_; m <= N_; ++m) {
        const int step = ((m % P) + P) % P;
        for (std::size_t k = 0; k < K; ++k) {
            cplx sum = 0;
            int idx = 0;
            for (int n = 0; n < P; ++n) {
                sum += samples[static_cast<std::size_t>(n) * K + k] * cplx(cos_table_[idx], -sin_table_[idx]);
                idx += step;
                if (idx >= P) idx -= P;
            }
            column[k] = sum / static_cast<double>(P);
        }
        const auto c = dlt(m, column);
        for (int l = std::abs(m); l <= N_; ++l) coeffs[packed_index(l, m)] = c[l - std::abs(m)];
    }
    return coeffs;
}

std::vector<cplx> SphereGrid::inverse(std::span<const cplx> coefficients) const {
    check_coefficients(coefficients.size());
    const int P = n_phi();
    const std::size_t K = theta_.size();
    std::vector<cplx> samples(n_samples(), 0.0);
    std::vector<cplx> c;
    for (int m = -N_; m <= N_; ++m) {
        const int am = std::abs(m);
        c.assign(N_ - am + 1, 0.0);
        for (int l = am; l <= N_; ++l) c[l - am] = coefficients[packed_index(l, m)];
        const auto column = idlt(m, c);
        const int step = ((m % P) + P) % P;
        int idx = 0;
        for (int n = 0; n < P; ++n) {
            const cplx tw(cos_table_[idx], sin_table_[idx]);
            for (std::size_t k = 0; k < K; ++k) samples[static_cast<std::size_t>(n) * K + k] += column[k] * tw;
            idx += step;
            if (idx >= P) idx -= P;
        }
    }
    return samples;
}

std::vector<double> SphereGrid::inverse_real(std::span<const cplx> coefficients) const {
    check_coefficients(coefficients.size());
    const int P = n_phi();
    const std::size_t K = theta_.size();
    std::vector<double> samples(n_samples(), 0.0);
    std::vector<cplx> c;
    for (int m = 0; m <= N_; ++m) {
        c.assign(N_ - m + 1, 0.0);
        for (int l = m; l <= N_; ++l) c[l - m] = coefficients[packed_index(l, m)];
        const auto column = idlt(m, c);
        const double factor = m == 0 ? 1.0 : 2.0;
        int idx = 0;
        for (int n = 0; n < P; ++n) {
            const double cr = cos_table_[idx], ci = sin_table_[idx];
            double* out = samples.data() + static_cast<std::size_t>(n) * K;
            for (std::size_t k = 0; k < K; ++k)
                out[k] += factor * (column[k].real() * cr - column[k].imag() * ci);
            idx += m;
            if (idx >= P) idx -= P;
        }
    }
    return samples;
}

HarmonicStack::HarmonicStack(int N, int n_radial)
    : N_(N), n_radial_(n_radial), data_(packed_size(N) * static_cast<std::size_t>(n_radial)) {
    if (N < 0 || n_radial < 0) throw ShapeError("HarmonicStack: negative dimensions");
}

std::vector<cplx> HarmonicStack::shell(int i) const {
    std::vector<cplx> out(packed_size(N_));
    for (std::size_t lm = 0; lm < out.size(); ++lm) out[lm] = data_[lm * n_radial_ + i];
    return out;
}

void HarmonicStack::set_shell(int i, std::span<const cplx> packed) {
    if (packed.size() != packed_size(N_)) throw ShapeError("HarmonicStack::set_shell: wrong coefficient count");
    for (std::size_t lm = 0; lm < packed.size(); ++lm) data_[lm * n_radial_ + i] = packed[lm];
}

HarmonicStack dsht(const SphereGrid& grid, std::span<const double> samples, int n_radial) {
    const std::size_t block = grid.n_samples();
    if (samples.size() != block * static_cast<std::size_t>(n_radial))
        throw ShapeError("dsht: sample count does not match grid x radial count");
    HarmonicStack stack(grid.order(), n_radial);
    for (int i = 0; i < n_radial; ++i)
        stack.set_shell(i, grid.forward(samples.subspan(static_cast<std::size_t>(i) * block, block)));
    return stack;
}

std::vector<double> idsht(const SphereGrid& grid, const HarmonicStack& stack) {
    if (stack.order() != grid.order()) throw ShapeError("idsht: order mismatch");
    const std::size_t block = grid.n_samples();
    std::vector<double> out(block * static_cast<std::size_t>(stack.n_radial()));
    for (int i = 0; i < stack.n_radial(); ++i) {
        const auto values = grid.inverse_real(stack.shell(i));
        std::copy(values.begin(), values.end(), out.begin() + static_cast<std::ptrdiff_t>(i * block));
    }
    return out;
}

}  // namespace cst
