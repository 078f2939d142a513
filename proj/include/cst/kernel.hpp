#pragma once

#include <vector>

namespace cst {

/// Outer variable p (torus diameter), inner variable r (radius), degree l.
struct KernelPoint {
    double p = 0;
    double r = 0;
    int l = 0;
};

/// Geometric factors of the Abel kernel.
struct QFactors {
    double Q1 = 0;  // 2 pi r^2 sqrt(p^2 - R^2) / (R p sqrt(p + r))
    double Q2 = 0;  // 2 pi r / p
    double Q3 = 0;  // sqrt(p^2 - R^2) sqrt(p + r) / p^2
    double Q4 = 0;  // R r / p^2
};

/// Requires p > R and R <= r <= p.
QFactors q_factors(double p, double r, double R);

/// Kernel K_l(p, r) as the sum over the two torus branches (arcsine form).
double kernel_direct(KernelPoint point, double R);

/// Same kernel, regrouped in powers of (p - r) around P_l(Q4). The square root
/// sqrt(p - r) cancels, so the value extends smoothly across the diagonal.
/// Where that series is badly conditioned (large l, far from the diagonal) the
/// even and odd parts are summed in closed form instead.
double kernel_expanded(KernelPoint point, double R);

/// kernel_expanded without the r <= p check; defined for any r >= 0 and p > R.
double kernel_expanded_extended(double p, double r, int l, double R);

/// K_l(r, r) = (sqrt(8) pi / R) sqrt(r) sqrt(r^2 - R^2) P_l(R / r).
double kernel_diagonal(double r, int l, double R);

/// Radii r0 in [r_m, r_M] with P_l(R / r0) = 0, increasing.
std::vector<double> diagonal_roots(int l, double R, double r_m, double r_M);

struct KernelGradient {
    double kappa1 = 0;  // dK/dp on the diagonal
    double kappa2 = 0;  // dK/dr on the diagonal
};

/// Central finite differences of kernel_expanded at (r0, r0), step 1e-5 r0,
/// one-sided when r0 - h would fall below R.
KernelGradient kernel_gradient(double r0, int l, double R);

/// Closed-form gradient at a diagonal root:
/// kappa1 = -4 pi P'(R/r0) sqrt(2 r0) sqrt(r0^2 - R^2) / r0^2, kappa2 = -kappa1 / 2.
KernelGradient kernel_gradient_closed_form(double r0, int l, double R);

/// 1 + kappa1 / (2 (kappa1 + kappa2)) from the finite-difference gradient.
/// Throws NumericalError when kappa1 + kappa2 vanishes.
double gradient_ratio(double r0, int l, double R);

}  // namespace cst
