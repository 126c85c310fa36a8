#pragma once

// Scalar helpers shared across the library: cancellation-safe exponential
// differences, small power-times-exponential integrals, a golden-section
// minimizer and a bracketed Newton root polisher.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace levypass::num {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& z) { return z.real(); }

inline double expm1s(double z) { return std::expm1(z); }

/// expm1 for complex arguments; series below |z| = 0.5 where exp(z) - 1 cancels.
inline std::complex<double> expm1s(std::complex<double> z) {
    if (std::abs(z) >= 0.5) return std::exp(z) - 1.0;
    std::complex<double> term = z;
    std::complex<double> sum = z;
    for (int k = 2; k <= 24; ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
        if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

/// eta0(z) = (e^z - 1)/z, continuous value 1 at z = 0.
template <class S>
S eta0(S z) {
    if (std::abs(z) == 0.0) return S(1);
    return expm1s(z) / z;
}

/// eta1(z) = (e^z (z - 1) + 1)/z^2 = 1/2 + z/3 + z^2/8 + ..., value 1/2 at z = 0.
template <class S>
S eta1(S z) {
    if (std::abs(z) < 1e-3) {
        return S(0.5) + z * (S(1.0 / 3.0) + z * (S(0.125) + z * (S(1.0 / 30.0) + z * S(1.0 / 144.0))));
    }
    return (std::exp(z) * (z - S(1)) + S(1)) / (z * z);
}

/// eta2(z) = integral of t^2 e^{z t} over [0, 1] = (e^z (z^2 - 2z + 2) - 2)/z^3,
/// value 1/3 at z = 0.  Series sum z^m / (m! (m + 3)).
template <class S>
S eta2(S z) {
    if (std::abs(z) < 1e-2) {
        S out(0), term(1);
        for (int m = 0; m < 7; ++m) {
            out += term / S(m + 3);
            term *= z / S(m + 1);
        }
        return out;
    }
    return (std::exp(z) * (z * z - S(2) * z + S(2)) - S(2)) / (z * z * z);
}

/// (e^{-a x} - e^{-b x}) / (b - a), the divided difference of s -> e^{-s x}.
/// Safe for a == b; intended for Re a, Re b >= 0 and x >= 0 so that neither
/// exponential overflows.
template <class S>
S dexp_ratio(S a, S b, double x) {
    S d = (b - a) * x;
    if (std::abs(d) < 1e-4) {
        // x e^{-a x} (1 - e^{-d})/d expanded; truncation below 1e-17 relative.
        return x * std::exp(-a * x) * (S(1) - d * (S(0.5) - d * (S(1.0 / 6.0) - d * S(1.0 / 24.0))));
    }
    return (std::exp(-a * x) - std::exp(-b * x)) / (b - a);
}

/// Integral of e^{s u} (g0 + (g1 - g0) u/h) over u in [0, h]: the exact
/// transform of one linear cell, with the weight anchored at the cell's left
/// edge. All damped sweeps and grid transforms reduce to this.
template <class S>
S cell_exp_linear(S s, double h, double g0, double g1) {
    S sh = s * h;
    return h * (g0 * eta0(sh) + (g1 - g0) * eta1(sh));
}

/// J_j(r, w) = integral of u^j e^{-r u} over [0, w], j = 0..k stored in out.
/// Series for small |r w|, upward recurrence otherwise.
template <class S>
void powexp_cell(S r, double w, int k, S* out) {
    if (std::abs(r) * w < 0.5) {
        S mrw = -r * w;
        for (int j = 0; j <= k; ++j) {
            S p = S(1); // (-r w)^m / m!
            S sum = S(1) / static_cast<double>(j + 1);
            for (int m = 1; m <= 30; ++m) {
                p *= mrw / static_cast<double>(m);
                S term = p / static_cast<double>(j + m + 1);
                sum += term;
                if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
            }
            out[j] = sum * std::pow(w, j + 1);
        }
        return;
    }
    S e = std::exp(-r * w);
    out[0] = (S(1) - e) / r;
    double wj = 1.0;
    for (int j = 1; j <= k; ++j) {
        wj *= w;
        out[j] = (static_cast<double>(j) * out[j - 1] - wj * e) / r;
    }
}

/// Integral of y^k e^{-r y} over [y0, y1], 0 <= y0 <= y1 <= inf (r > 0 if
/// y1 = inf). k <= 8.
template <class S>
S powexp_integral(int k, S r, double y0, double y1) {
    static const double fact[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    if (y1 == inf) {
        if (!(real_part(r) > 0)) throw DomainError("powexp_integral: divergent tail, Re r <= 0");
        // e^{-r y0} k!/r^{k+1} sum_{j<=k} (r y0)^j / j!
        S sum = S(0);
        S p = S(1);
        for (int j = 0; j <= k; ++j) {
            sum += p / fact[j];
            p *= r * y0;
        }
        S rinv = S(1) / r;
        S scale = rinv;
        for (int j = 0; j < k; ++j) scale *= rinv;
        return std::exp(-r * y0) * fact[k] * scale * sum;
    }
    double w = y1 - y0;
    if (w <= 0) return S(0);
    S cells[9];
    powexp_cell(r, w, k, cells);
    // (y0 + u)^k expanded binomially.
    static const double binom[9][9] = {
        {1, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 1, 0, 0, 0, 0, 0, 0, 0},
        {1, 2, 1, 0, 0, 0, 0, 0, 0},
        {1, 3, 3, 1, 0, 0, 0, 0, 0},
        {1, 4, 6, 4, 1, 0, 0, 0, 0},
        {1, 5, 10, 10, 5, 1, 0, 0, 0},
        {1, 6, 15, 20, 15, 6, 1, 0, 0},
        {1, 7, 21, 35, 35, 21, 7, 1, 0},
        {1, 8, 28, 56, 70, 56, 28, 8, 1}};
    S sum = S(0);
    double y0pow = 1.0;
    for (int j = k; j >= 0; --j) {
        sum += binom[k][j] * y0pow * cells[j];
        y0pow *= y0;
    }
    return std::exp(-r * y0) * sum;
}

/// Golden-section minimum of a unimodal f on [a, b].
template <class F>
double minimize_scalar(F&& f, double a, double b, int iters = 200) {
    const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (b - a <= 1e-11 * (1.0 + std::abs(a) + std::abs(b))) break;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Newton iteration confined to a sign-changing bracket [lo, hi]; any step
/// that leaves the bracket or stalls becomes a bisection step.
template <class F, class DF>
double newton_bracketed(F&& f, DF&& df, double lo, double hi, double flo, double fhi, double ftol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NoRootError("newton_bracketed: bracket does not change sign");
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        double fx = f(x);
        if (std::abs(fx) <= ftol) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        double d = df(x);
        double xn = (d != 0.0) ? x - fx / d : lo;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * (std::abs(lo) + std::abs(hi))) {
            return 0.5 * (lo + hi);
        }
        x = xn;
    }
    throw NumericalError("newton_bracketed: no convergence after 200 iterations");
}

/// Pairwise (cascade) sum: error O(log n) ulps and independent of order used
/// by the caller to fill the buffer.
inline double pairwise_sum(const double* p, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

} // namespace levypass::num
