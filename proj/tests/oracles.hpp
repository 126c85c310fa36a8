#pragma once

// Slow, transparently-correct reference implementations used only by the
// tests. Everything here is straight quadrature of the defining integrals;
// none of it shares code with the library's closed-form evaluators beyond the
// model containers. Keep it that way: these are the referee.

#include <cmath>
#include <functional>
#include <stdexcept>

#include "levypass/jump_measure.hpp"
#include "levypass/model.hpp"

namespace oracles {

using Fn = std::function<double(double)>;

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const Fn& f, double a, double m, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) < 15.0 * tol) return left + right + err / 15.0;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson on [a, b], absolute tolerance. Composite over fixed
/// panels first: a lone Simpson pass can sample only dead zones of a
/// piecewise integrand and declare convergence at zero.
inline double integrate(const Fn& f, double a, double b, double tol = 1e-12) {
    if (!(b > a)) return 0.0;
    const int panels = 20;
    double h = (b - a) / panels, out = 0.0;
    for (int k = 0; k < panels; ++k) {
        double lo = a + k * h, hi = (k + 1 == panels) ? b : lo + h;
        double m = 0.5 * (lo + hi);
        double fa = f(lo), fm = f(m), fb = f(hi);
        out += detail::adapt(f, lo, m, hi, fa, fm, fb, detail::simpson(lo, hi, fa, fm, fb),
                             tol / panels, 40);
    }
    return out;
}

/// Integrate y -> density(y) * inner(y) over the whole measure, atoms summed
/// exactly. Exponential tails are truncated where density * |inner| has
/// decayed by e^{-85}; `growth` is a caller-supplied bound on the exponential
/// growth rate of |inner(y)| in |y| (0 for bounded integrands).
inline double against_measure(const levypass::JumpMeasure& nu, const Fn& inner,
                              double tol = 1e-12, double growth = 0.0) {
    using levypass::JumpKind;
    double out = 0.0;
    for (const auto& c : nu.components()) {
        switch (c.kind) {
        case JumpKind::atom:
            out += c.w * inner(c.y);
            break;
        case JumpKind::exp_pos: {
            if (c.rate - growth < 0.05)
                throw std::runtime_error("against_measure: integrand outgrows the tail");
            double lo = c.cutoff, hi = c.cutoff + 85.0 / (c.rate - growth);
            Fn f = [&](double y) {
                return c.intensity * c.rate * std::exp(-c.rate * y) * inner(y);
            };
            out += integrate(f, lo, hi, tol);
            break;
        }
        case JumpKind::exp_neg: {
            if (c.rate - growth < 0.05)
                throw std::runtime_error("against_measure: integrand outgrows the tail");
            double lo = c.cutoff, hi = c.cutoff + 85.0 / (c.rate - growth);
            Fn f = [&](double s) {
                return c.intensity * c.rate * std::exp(-c.rate * s) * inner(-s);
            };
            out += integrate(f, lo, hi, tol);
            break;
        }
        case JumpKind::uniform: {
            double dens = c.intensity / (c.b - c.a);
            Fn f = [&](double y) { return dens * inner(y); };
            out += integrate(f, c.a, c.b, tol);
            break;
        }
        case JumpKind::tabulated:
            for (std::size_t i = 0; i < c.points.size(); ++i)
                out += c.weights[i] * inner(c.points[i]);
            break;
        }
    }
    return out;
}

/// The bivariate kernel weight of the one-jump operator: the density (in the
/// pre-jump displacement a) of the diffusion run from 0, killed at rate
/// lambda + theta, and reflected off the passage level x.
inline double kernel_weight(double c0, double alpha, double x, double a) {
    return std::exp(-c0 * a) *
           (std::exp(-alpha * std::abs(a)) - std::exp(-(2.0 * x - a) * alpha));
}

/// Lambda_theta g(x) by direct nested quadrature of
///   (1/alpha) Int nu(dy) Int_{-inf}^{min(x, x-y)} w(a) g(x - a - y) da.
inline double lambda_oracle(const levypass::LevyModel& m, double theta, const Fn& g,
                            double x, double tol = 1e-11) {
    double alpha = m.alpha_theta(theta);
    Fn inner = [&](double y) {
        double hi = std::min(x, x - y);
        double lo = std::min(0.0, hi) - 85.0 / (alpha - m.c0) - 1.0;
        Fn f = [&](double a) { return kernel_weight(m.c0, alpha, x, a) * g(x - a - y); };
        return integrate(f, lo, hi, tol);
    };
    return against_measure(m.nu, inner, tol) / alpha;
}

/// First-jump direct crossing term by the same kernel, restricted to jumps
/// that carry the path across: a in (x - y, x), overshoot a + y - x,
/// undershoot x - a.
inline double f1_oracle(const levypass::LevyModel& m, double theta, double mu, double rho,
                        double x, double tol = 1e-11) {
    double alpha = m.alpha_theta(theta);
    Fn inner = [&](double y) {
        if (y <= 0.0) return 0.0;
        double lo = x - y, hi = x;
        lo = std::max(lo, std::min(0.0, hi) - 85.0 / (alpha - m.c0) - 1.0);
        Fn f = [&](double a) {
            return kernel_weight(m.c0, alpha, x, a) *
                   std::exp(-mu * (a + y - x) - rho * (x - a));
        };
        return integrate(f, lo, hi, tol);
    };
    return against_measure(m.nu, inner, tol) / alpha;
}

/// R h(q) = Int_{y<0} nu(dy) Int_0^{-y} (e^{-q(b+y)} - 1) h(b) db by nested
/// quadrature. Real q only; the defining integral needs q below every
/// exp-negative rate, and the truncation below needs some room beyond that.
inline double r_oracle(const levypass::JumpMeasure& nu, const Fn& h, double q,
                       double tol = 1e-11) {
    Fn inner = [&](double y) {
        if (y >= 0.0) return 0.0;
        // e^{-q(b+y)} - 1 = e^{-qy} (e^{-qb} - e^{qy}): the bracket stays
        // O(1), so quadrature to absolute tolerance is meaningful even when
        // e^{-qy} is huge. The e^{qs}-amplified error is damped back below
        // tol by the e^{-rate s} measure density, since rate > q here.
        double s = -y;
        Fn f = [&](double b) { return (std::exp(-q * b) - std::exp(-q * s)) * h(b); };
        return std::exp(q * s) * integrate(f, 0.0, s, tol);
    };
    return against_measure(nu, inner, tol, std::max(q, 0.0));
}

} // namespace oracles
