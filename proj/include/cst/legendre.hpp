#pragma once

#include <vector>

namespace cst {

/// Legendre polynomial P_l(x) by three-term recurrence.
double legendre(int l, double x);

struct LegendreDerivatives {
    double value = 0;   // P_l(x)
    double first = 0;   // P_l'(x)
    double second = 0;  // P_l''(x)
};

/// P_l, P_l' and P_l''. The second derivative uses
/// (1 - x^2) P'' = 2 x P' - l (l + 1) P, with a derivative recurrence at |x| = 1.
LegendreDerivatives legendre_derivatives(int l, double x);

/// Taylor coefficients P_l^(j)(x) / j! for j = 0..l.
std::vector<double> legendre_taylor(int l, double x);

/// Associated Legendre function P_l^m(x), 0 <= m <= l, |x| <= 1, with the
/// Condon-Shortley factor (-1)^m included.
double assoc_legendre(int l, int m, double x);

/// sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) (1-x^2)^{m/2} d^m P_l/dx^m for l = m..lmax,
/// by the normalized recurrence (no overflow for large l, m).
/// Equals qlm(l, m) * assoc_legendre(l, m, x) for m >= 0.
std::vector<double> normalized_legendre(int m, int lmax, double x);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; nodes in decreasing order.
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b], nodes increasing.
QuadratureRule gauss_legendre(int n, double a, double b);

/// Roots of P_l in increasing order, bracketed through the interlacing of
/// consecutive degrees and refined by bisection to |dx| <= tol.
std::vector<double> legendre_roots(int l, double tol = 1e-12);

}  // namespace cst
