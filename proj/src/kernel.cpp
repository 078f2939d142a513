#include "cst/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cst/error.hpp"
#include "cst/geometry.hpp"
#include "cst/legendre.hpp"

namespace cst {

namespace {

// Points computed from grid arithmetic may exceed p by a few ulps.
constexpr double kRelativeSlack = 1e-12;

void check_point(double p, double r, double R) {
    if (!(R > 0)) throw DomainError("kernel: R must be positive");
    if (!(p > R)) throw DomainError("kernel: p must exceed R");
    if (!(r >= R * (1 - kRelativeSlack))) throw DomainError("kernel: r must be >= R");
    if (!(r <= p * (1 + kRelativeSlack))) throw DomainError("kernel: r must be <= p");
}

QFactors factors_unchecked(double p, double r, double R) {
    const double root_pR = std::sqrt(p * p - R * R);
    const double root_sum = std::sqrt(p + r);
    return {2 * pi * r * r * root_pR / (R * p * root_sum), 2 * pi * r / p, root_pR * root_sum / (p * p),
            R * r / (p * p)};
}

}  // namespace

QFactors q_factors(double p, double r, double R) {
    check_point(p, r, R);
    return factors_unchecked(p, std::min(r, p), R);
}

double kernel_direct(KernelPoint point, double R) {
    check_point(point.p, point.r, R);
    const double p = point.p, r = std::min(point.r, point.p);
    const double a = std::asin(std::min(1.0, r / p));
    const double b = std::asin(R / p);
    const double front = 2 * pi / R * p * r / std::sqrt(p + r);
    double sum = 0;
    for (int sigma : {1, -1}) {
        const double parity = (sigma < 0 && point.l % 2 == 1) ? -1.0 : 1.0;
        sum += parity * std::sin(a - sigma * b) * legendre(point.l, std::cos(b - sigma * a));
    }
    return front * sum;
}

double kernel_expanded_extended(double p, double r, int l, double R) {
    const QFactors q = factors_unchecked(p, r, R);
    const double d = p - r;
    const LegendreDerivatives P = legendre_derivatives(l, q.Q4);
    const double head = 2 * q.Q1 * P.value;
    const double linear = 2 * d * (0.5 * q.Q3 * q.Q3 * q.Q1 * P.second - q.Q3 * q.Q2 * P.first);
    if (l < 3 || d == 0.0) return head + linear;
    // Remaining terms carry (p - r)^i, i >= 2, with Taylor coefficients
    // P^(j)(Q4) / j! in place of the monomial expansion of P_l.
    const std::vector<double> taylor = legendre_taylor(l, q.Q4);
    double tail = 0;
    double magnitude = std::abs(head) + std::abs(linear);
    double d_pow = d;
    double q3_pow = q.Q3 * q.Q3;
    for (int i = 2; 2 * i - 1 <= l; ++i) {
        d_pow *= d;
        const double q3_odd = q3_pow * q.Q3;
        const double q3_even = q3_odd * q.Q3;
        if (2 * i <= l) {
            const double t = q.Q1 * q3_even * d_pow * taylor[2 * i];
            tail += t;
            magnitude += std::abs(t);
        }
        const double t = q.Q2 * q3_odd * d_pow * taylor[2 * i - 1];
        tail -= t;
        magnitude += std::abs(t);
        q3_pow = q3_even;
    }
    const double k = head + linear + 2 * tail;
    // Far from the diagonal the series cancels heavily for large l; there the
    // same even/odd sums are evaluated as P(Q4 + h) +- P(Q4 - h).
    const double rounding = 4 * (l + 1) * std::numeric_limits<double>::epsilon() * 2 * magnitude;
    if (d > 0 && rounding > 1e-12 * (1 + std::abs(k))) {
        const double s = std::sqrt(d);
        const double h = q.Q3 * s;
        const double plus = legendre(l, std::min(q.Q4 + h, 1.0));
        const double minus = legendre(l, std::max(q.Q4 - h, -1.0));
        return q.Q1 * (plus + minus) - q.Q2 * s * (plus - minus);
    }
    return k;
}

double kernel_expanded(KernelPoint point, double R) {
    check_point(point.p, point.r, R);
    return kernel_expanded_extended(point.p, std::min(point.r, point.p), point.l, R);
}

double kernel_diagonal(double r, int l, double R) {
    if (!(R > 0) || !(r >= R)) throw DomainError("kernel_diagonal: need r >= R > 0");
    return std::sqrt(8.0) * pi / R * std::sqrt(r) * std::sqrt(r * r - R * R) * legendre(l, R / r);
}

std::vector<double> diagonal_roots(int l, double R, double r_m, double r_M) {
    std::vector<double> out;
    if (l < 1) return out;
    const double x_lo = R / r_M, x_hi = R / r_m;
    for (double x : legendre_roots(l))
        if (x > 0 && x >= x_lo && x <= x_hi) out.push_back(R / x);
    std::sort(out.begin(), out.end());
    return out;
}

KernelGradient kernel_gradient(double r0, int l, double R) {
    const double h = 1e-5 * r0;
    auto K = [&](double p, double r) { return kernel_expanded_extended(p, r, l, R); };
    KernelGradient g;
    if (r0 - h > R) {
        g.kappa1 = (K(r0 + h, r0) - K(r0 - h, r0)) / (2 * h);
        g.kappa2 = (K(r0, r0 + h) - K(r0, r0 - h)) / (2 * h);
    } else {
        const double k0 = K(r0, r0);
        g.kappa1 = (-3 * k0 + 4 * K(r0 + h, r0) - K(r0 + 2 * h, r0)) / (2 * h);
        g.kappa2 = (-3 * k0 + 4 * K(r0, r0 + h) - K(r0, r0 + 2 * h)) / (2 * h);
    }
    return g;
}

KernelGradient kernel_gradient_closed_form(double r0, int l, double R) {
    const double dP = legendre_derivatives(l, R / r0).first;
    const double shape = std::sqrt(2 * r0) * std::sqrt(r0 * r0 - R * R) / (r0 * r0);
    return {-4 * pi * dP * shape, 2 * pi * dP * shape};
}

double gradient_ratio(double r0, int l, double R) {
    const KernelGradient g = kernel_gradient(r0, l, R);
    const double sum = g.kappa1 + g.kappa2;
    const double scale = std::abs(g.kappa1) + std::abs(g.kappa2);
    if (!(std::abs(sum) > 1e-12 * scale) || scale == 0.0)
        throw NumericalError("gradient_ratio: kappa1 + kappa2 vanishes; r0 is not a simple diagonal root");
    return 1 + 0.5 * g.kappa1 / sum;
}

}  // namespace cst
