#include "cst/legendre.hpp"

#include <cmath>
#include <numbers>

#include "cst/error.hpp"

namespace cst {

double legendre(int l, double x) {
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= l; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> legendre_taylor(int l, double x) {
    // t[k][n] = P_n^(k)(x) / k!, from P_n^(k) = P_{n-2}^(k) + (2n-1) P_{n-1}^(k-1).
    std::vector<std::vector<double>> t(l + 1, std::vector<double>(l + 1, 0.0));
    for (int n = 0; n <= l; ++n) t[0][n] = legendre(n, x);
    for (int k = 1; k <= l; ++k)
        for (int n = k; n <= l; ++n) {
            const double lower = n >= 2 ? t[k][n - 2] : 0.0;
            t[k][n] = lower + (2.0 * n - 1.0) / k * t[k - 1][n - 1];
        }
    std::vector<double> out(l + 1);
    for (int k = 0; k <= l; ++k) out[k] = t[k][l];
    return out;
}

LegendreDerivatives legendre_derivatives(int l, double x) {
    // P'_n = P'_{n-2} + (2n-1) P_{n-1}
    double p_prev = 0, p = 1, dp_prev = 0, dp = 0;
    for (int n = 1; n <= l; ++n) {
        const double p_next = n == 1 ? x : ((2 * n - 1) * x * p - (n - 1) * p_prev) / n;
        const double dp_next = dp_prev + (2 * n - 1) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    LegendreDerivatives d{p, dp, 0.0};
    const double one_minus = 1.0 - x * x;
    if (one_minus > 1e-8)
        d.second = (2 * x * dp - l * (l + 1.0) * p) / one_minus;
    else if (l >= 2)
        d.second = 2.0 * legendre_taylor(l, x)[2];
    return d;
}

double assoc_legendre(int l, int m, double x) {
    if (m < 0 || m > l) throw DomainError("assoc_legendre: need 0 <= m <= l");
    if (!(std::abs(x) <= 1.0)) throw DomainError("assoc_legendre: |x| must be <= 1");
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * s;
    if (l == m) return pmm;
    double pm1 = x * (2.0 * m + 1.0) * pmm;
    for (int n = m + 2; n <= l; ++n) {
        const double pn = (x * (2.0 * n - 1.0) * pm1 - (n + m - 1.0) * pmm) / (n - m);
        pmm = pm1;
        pm1 = pn;
    }
    return pm1;
}

std::vector<double> normalized_legendre(int m, int lmax, double x) {
    if (m < 0 || m > lmax) throw DomainError("normalized_legendre: need 0 <= m <= lmax");
    std::vector<double> out(lmax - m + 1);
    const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double nmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int k = 1; k <= m; ++k) nmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    out[0] = nmm;
    if (lmax == m) return out;
    out[1] = std::sqrt(2.0 * m + 3.0) * x * nmm;
    for (int l = m + 2; l <= lmax; ++l) {
        const double ll = l, mm = m;
        const double a = std::sqrt((4 * ll * ll - 1) / (ll * ll - mm * mm));
        const double b = std::sqrt(((ll - 1) * (ll - 1) - mm * mm) / (4 * (ll - 1) * (ll - 1) - 1));
        out[l - m] = a * (x * out[l - m - 1] - b * out[l - m - 2]);
    }
    return out;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            const double pn = n == 1 ? x : p1;
            dp = n * (x * pn - p0) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1;
        dp = n * (x * (n == 1 ? x : p1) - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = x;
        rule.nodes[n - 1 - i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule base = gauss_legendre(n);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid - half * base.nodes[i];
        rule.weights[i] = half * base.weights[i];
    }
    return rule;
}

std::vector<double> legendre_roots(int l, double tol) {
    if (l < 1) return {};
    std::vector<double> roots{0.0};
    for (int n = 2; n <= l; ++n) {
        std::vector<double> edges;
        edges.reserve(roots.size() + 2);
        edges.push_back(-1.0);
        edges.insert(edges.end(), roots.begin(), roots.end());
        edges.push_back(1.0);
        std::vector<double> next;
        next.reserve(n);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            double lo = edges[i], hi = edges[i + 1];
            double flo = legendre(n, lo);
            if (flo == 0.0) {
                next.push_back(lo);
                continue;
            }
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                const double fmid = legendre(n, mid);
                if (fmid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fmid < 0) == (flo < 0)) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            next.push_back(0.5 * (lo + hi));
        }
        if (static_cast<int>(next.size()) != n)
            throw NumericalError("legendre_roots: interlacing bracket failed");
        roots = std::move(next);
    }
    return roots;
}

}  // namespace cst
