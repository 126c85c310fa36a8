#pragma once

// Finite-activity jump measures as mixtures of parametric components, with
// closed-form Laplace-type integrals per component. Every downstream formula
// (first-passage terms, transform identities, the contraction operator) is
// assembled from the primitives here; each primitive is written so that no
// intermediate exceeds the magnitude of the inputs when the real parts of the
// rate arguments are nonnegative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace levypass {

enum class JumpKind { atom, exp_pos, exp_neg, uniform, tabulated };

inline const char* to_string(JumpKind k) {
    switch (k) {
    case JumpKind::atom: return "atom";
    case JumpKind::exp_pos: return "exp_pos";
    case JumpKind::exp_neg: return "exp_neg";
    case JumpKind::uniform: return "uniform";
    case JumpKind::tabulated: return "tabulated";
    }
    return "?";
}

namespace detail {

inline double re(double x) { return x; }
inline double re(const std::complex<double>& z) { return z.real(); }

/// Divided difference (e^{-u t} - e^{-v t})/(u - v), with the removable
/// value -t e^{-u t} at u = v.
template <class S>
S dd_exp(S u, S v, double t) {
    return -num::dexp_ratio(u, v, t);
}

/// Integral of y^k e^{-q y} over a finite interval [a, b] that may lie on
/// either side of 0 (split at 0 when straddling).
template <class S>
S powexp_signed(int k, S q, double a, double b) {
    if (a >= b) return S(0);
    if (a >= 0) return num::powexp_integral(k, q, a, b);
    if (b <= 0) {
        double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        return sgn * num::powexp_integral(k, -q, -b, -a);
    }
    return powexp_signed(k, q, a, 0.0) + powexp_signed(k, q, 0.0, b);
}

} // namespace detail

/// One mixture component of the jump measure. Fields are public and
/// interpreted by kind:
///   atom        point mass w at y != 0
///   exp_pos     density intensity*rate*e^{-rate*y} restricted to y > cutoff
///   exp_neg     mirror image on y < -cutoff
///   uniform     density intensity/(b-a) on (a, b); may straddle 0
///   tabulated   point masses weights[i] at points[i]
/// The cutoff field keeps exponential components closed under truncation.
struct JumpComponent {
    JumpKind kind = JumpKind::atom;
    double y = 0.0;
    double w = 0.0;
    double intensity = 0.0;
    double rate = 0.0;
    double cutoff = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> points;
    std::vector<double> weights;

    static JumpComponent make_atom(double y, double w) {
        JumpComponent c;
        c.kind = JumpKind::atom;
        c.y = y;
        c.w = w;
        return c;
    }
    static JumpComponent make_exp_pos(double intensity, double rate, double cutoff = 0.0) {
        JumpComponent c;
        c.kind = JumpKind::exp_pos;
        c.intensity = intensity;
        c.rate = rate;
        c.cutoff = cutoff;
        return c;
    }
    static JumpComponent make_exp_neg(double intensity, double rate, double cutoff = 0.0) {
        JumpComponent c = make_exp_pos(intensity, rate, cutoff);
        c.kind = JumpKind::exp_neg;
        return c;
    }
    static JumpComponent make_uniform(double a, double b, double intensity) {
        JumpComponent c;
        c.kind = JumpKind::uniform;
        c.a = a;
        c.b = b;
        c.intensity = intensity;
        return c;
    }
    static JumpComponent make_tabulated(std::vector<double> points, std::vector<double> weights) {
        JumpComponent c;
        c.kind = JumpKind::tabulated;
        c.points = std::move(points);
        c.weights = std::move(weights);
        return c;
    }

    void validate() const {
        switch (kind) {
        case JumpKind::atom:
            if (y == 0.0) throw ConfigError("atom: location must be nonzero");
            if (!(w > 0.0)) throw ConfigError("atom: mass must be positive");
            break;
        case JumpKind::exp_pos:
        case JumpKind::exp_neg:
            if (!(intensity > 0.0)) throw ConfigError("exp component: intensity must be positive");
            if (!(rate > 0.0)) throw ConfigError("exp component: rate must be positive");
            if (!(cutoff >= 0.0)) throw ConfigError("exp component: cutoff must be >= 0");
            break;
        case JumpKind::uniform:
            if (!(a < b)) throw ConfigError("uniform: requires a < b");
            if (!(intensity > 0.0)) throw ConfigError("uniform: intensity must be positive");
            break;
        case JumpKind::tabulated:
            if (points.empty() || points.size() != weights.size())
                throw ConfigError("tabulated: points/weights must be nonempty and equal length");
            for (double p : points)
                if (p == 0.0) throw ConfigError("tabulated: points must be nonzero");
            for (double wt : weights)
                if (!(wt >= 0.0)) throw ConfigError("tabulated: weights must be nonnegative");
            break;
        }
    }

    double mass() const {
        switch (kind) {
        case JumpKind::atom: return w;
        case JumpKind::exp_pos:
        case JumpKind::exp_neg: return intensity * std::exp(-rate * cutoff);
        case JumpKind::uniform: return intensity;
        case JumpKind::tabulated: {
            double s = 0;
            for (double wt : weights) s += wt;
            return s;
        }
        }
        return 0;
    }

    double mean() const {
        switch (kind) {
        case JumpKind::atom: return w * y;
        case JumpKind::exp_pos: return intensity * std::exp(-rate * cutoff) * (cutoff + 1.0 / rate);
        case JumpKind::exp_neg: return -intensity * std::exp(-rate * cutoff) * (cutoff + 1.0 / rate);
        case JumpKind::uniform: return intensity * 0.5 * (a + b);
        case JumpKind::tabulated: {
            double s = 0;
            for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * points[i];
            return s;
        }
        }
        return 0;
    }

    /// Positive restriction of a uniform component as (lo, hi, intensity);
    /// empty when the support does not meet (0, inf).
    std::optional<JumpComponent> uniform_pos_piece() const {
        if (kind != JumpKind::uniform || b <= 0.0) return std::nullopt;
        double lo = std::max(a, 0.0);
        return make_uniform(lo, b, intensity * (b - lo) / (b - a));
    }
    std::optional<JumpComponent> uniform_neg_piece() const {
        if (kind != JumpKind::uniform || a >= 0.0) return std::nullopt;
        double hi = std::min(b, 0.0);
        return make_uniform(a, hi, intensity * (hi - a) / (b - a));
    }
};

/// A finite-activity Lévy measure: a list of components plus cached totals
/// and per-component cumulative masses for sampling. Immutable after
/// construction.
class JumpMeasure {
public:
    JumpMeasure() = default;

    explicit JumpMeasure(std::vector<JumpComponent> comps) : comps_(std::move(comps)) {
        for (const auto& c : comps_) c.validate();
        cum_mass_.reserve(comps_.size());
        double acc = 0;
        for (const auto& c : comps_) {
            acc += c.mass();
            cum_mass_.push_back(acc);
        }
        lambda_ = acc;
        for (const auto& c : comps_) {
            mean_ += c.mean();
            switch (c.kind) {
            case JumpKind::atom:
                (c.y > 0 ? pos_mass_ : neg_mass_) += c.w;
                break;
            case JumpKind::exp_pos:
                pos_mass_ += c.mass();
                r_pos_ = std::min(r_pos_, c.rate);
                break;
            case JumpKind::exp_neg:
                neg_mass_ += c.mass();
                r_neg_ = std::min(r_neg_, c.rate);
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) pos_mass_ += p->mass();
                if (auto n = c.uniform_neg_piece()) neg_mass_ += n->mass();
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    (c.points[i] > 0 ? pos_mass_ : neg_mass_) += c.weights[i];
                break;
            }
        }
    }

    const std::vector<JumpComponent>& components() const { return comps_; }
    double mass() const { return lambda_; }
    double mean() const { return mean_; }
    double pos_mass() const { return pos_mass_; }
    double neg_mass() const { return neg_mass_; }
    /// Abscissa bounds of the two-sided transform: lt(q) converges for
    /// -r_pos() < Re q < r_neg().
    double r_pos() const { return r_pos_; }
    double r_neg() const { return r_neg_; }
    bool has_positive_jumps() const { return pos_mass_ > 0; }
    bool has_negative_jumps() const { return neg_mass_ > 0; }

    /// nu restricted to |y| >= eps; exponential components keep their law via
    /// the cutoff field, uniforms shrink or split, atoms and tabulated points
    /// inside (-eps, eps) are dropped.
    JumpMeasure truncated(double eps) const {
        if (!(eps > 0)) throw ConfigError("truncated: eps must be positive");
        std::vector<JumpComponent> out;
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (std::abs(c.y) >= eps) out.push_back(c);
                break;
            case JumpKind::exp_pos:
            case JumpKind::exp_neg:
                out.push_back(c);
                out.back().cutoff = std::max(c.cutoff, eps);
                break;
            case JumpKind::uniform: {
                double lo = c.a, hi = c.b;
                double den = hi - lo;
                double nlo = lo, nhi = std::min(hi, -eps);
                if (nhi > nlo)
                    out.push_back(JumpComponent::make_uniform(nlo, nhi, c.intensity * (nhi - nlo) / den));
                double plo = std::max(lo, eps), phi = hi;
                if (phi > plo)
                    out.push_back(JumpComponent::make_uniform(plo, phi, c.intensity * (phi - plo) / den));
                break;
            }
            case JumpKind::tabulated: {
                std::vector<double> p, wt;
                for (std::size_t i = 0; i < c.points.size(); ++i) {
                    if (std::abs(c.points[i]) >= eps) {
                        p.push_back(c.points[i]);
                        wt.push_back(c.weights[i]);
                    }
                }
                if (!p.empty()) out.push_back(JumpComponent::make_tabulated(std::move(p), std::move(wt)));
                break;
            }
            }
        }
        return JumpMeasure(std::move(out));
    }

    /// Draws one jump size from the normalized mixture nu/lambda.
    template <class Rng>
    double sample(Rng& rng) const {
        if (!(lambda_ > 0)) throw HypothesisError("sample: measure has zero mass");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double u = unit(rng) * lambda_;
        std::size_t ci = std::lower_bound(cum_mass_.begin(), cum_mass_.end(), u) - cum_mass_.begin();
        if (ci >= comps_.size()) ci = comps_.size() - 1;
        const auto& c = comps_[ci];
        switch (c.kind) {
        case JumpKind::atom:
            return c.y;
        case JumpKind::exp_pos: {
            std::exponential_distribution<double> e(c.rate);
            return c.cutoff + e(rng);
        }
        case JumpKind::exp_neg: {
            std::exponential_distribution<double> e(c.rate);
            return -(c.cutoff + e(rng));
        }
        case JumpKind::uniform: {
            std::uniform_real_distribution<double> v(c.a, c.b);
            return v(rng);
        }
        case JumpKind::tabulated: {
            double total = c.mass();
            double t = unit(rng) * total;
            double acc = 0;
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                acc += c.weights[i];
                if (t <= acc) return c.points[i];
            }
            return c.points.back();
        }
        }
        return 0;
    }

    // ---- transforms -------------------------------------------------------
    // All integrals below are per-component closed forms; S is double or
    // std::complex<double>.

    /// Two-sided transform lt(q) = integral of e^{-q y} nu(dy).
    /// Requires -r_pos() < Re q < r_neg().
    template <class S>
    S lt(S q) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                out += c.w * std::exp(-q * c.y);
                break;
            case JumpKind::exp_pos: {
                S d = c.rate + q;
                if (!(detail::re(d) > 0)) throw DomainError("lt: Re q <= -r_pos");
                out += c.intensity * c.rate * std::exp(-d * c.cutoff) / d;
                break;
            }
            case JumpKind::exp_neg: {
                S d = c.rate - q;
                if (!(detail::re(d) > 0)) throw DomainError("lt: Re q >= r_neg");
                out += c.intensity * c.rate * std::exp(-d * c.cutoff) / d;
                break;
            }
            case JumpKind::uniform:
                // intensity * e^{-qa} * eta0(-q(b-a)) equals the mean of
                // e^{-qy} over (a,b) times the mass.
                out += c.intensity * std::exp(-q * c.a) * num::eta0(-q * (c.b - c.a));
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    out += c.weights[i] * std::exp(-q * c.points[i]);
                break;
            }
        }
        return out;
    }

    /// d/dq of lt: -integral of y e^{-q y} nu(dy).
    template <class S>
    S lt_d1(S q) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                out += -c.w * c.y * std::exp(-q * c.y);
                break;
            case JumpKind::exp_pos: {
                S d = c.rate + q;
                if (!(detail::re(d) > 0)) throw DomainError("lt_d1: Re q <= -r_pos");
                out += -c.intensity * c.rate * num::powexp_integral(1, d, c.cutoff, num::inf);
                break;
            }
            case JumpKind::exp_neg: {
                S d = c.rate - q;
                if (!(detail::re(d) > 0)) throw DomainError("lt_d1: Re q >= r_neg");
                out += c.intensity * c.rate * num::powexp_integral(1, d, c.cutoff, num::inf);
                break;
            }
            case JumpKind::uniform:
                out += -c.intensity / (c.b - c.a) * detail::powexp_signed(1, q, c.a, c.b);
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    out += -c.weights[i] * c.points[i] * std::exp(-q * c.points[i]);
                break;
            }
        }
        return out;
    }

    /// d2/dq2 of lt: integral of y^2 e^{-q y} nu(dy).
    template <class S>
    S lt_d2(S q) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                out += c.w * c.y * c.y * std::exp(-q * c.y);
                break;
            case JumpKind::exp_pos: {
                S d = c.rate + q;
                if (!(detail::re(d) > 0)) throw DomainError("lt_d2: Re q <= -r_pos");
                out += c.intensity * c.rate * num::powexp_integral(2, d, c.cutoff, num::inf);
                break;
            }
            case JumpKind::exp_neg: {
                S d = c.rate - q;
                if (!(detail::re(d) > 0)) throw DomainError("lt_d2: Re q >= r_neg");
                out += c.intensity * c.rate * num::powexp_integral(2, d, c.cutoff, num::inf);
                break;
            }
            case JumpKind::uniform:
                out += c.intensity / (c.b - c.a) * detail::powexp_signed(2, q, c.a, c.b);
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    out += c.weights[i] * c.points[i] * c.points[i] * std::exp(-q * c.points[i]);
                break;
            }
        }
        return out;
    }

    /// Positive-side transform over [lo, hi) intersected with (0, inf):
    /// integral of e^{-q y} nu(dy). hi may be +inf (then Re q > -r_pos).
    template <class S>
    S lt_pos(S q, double lo, double hi) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y > 0 && c.y >= lo && c.y < hi) out += c.w * std::exp(-q * c.y);
                break;
            case JumpKind::exp_pos: {
                double l = std::max(lo, c.cutoff);
                if (l < hi) out += c.intensity * c.rate * num::powexp_integral(0, c.rate + q, l, hi);
                break;
            }
            case JumpKind::exp_neg:
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) {
                    double l = std::max(lo, p->a), h = std::min(hi, p->b);
                    if (l < h)
                        out += p->intensity / (p->b - p->a) * num::powexp_integral(0, q, l, h);
                }
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] > 0 && c.points[i] >= lo && c.points[i] < hi)
                        out += c.weights[i] * std::exp(-q * c.points[i]);
                break;
            }
        }
        return out;
    }

    /// integral over [x, inf) of e^{-q (y-x)} nu(dy): the transform of the
    /// overshoot-relevant tail, anchored at x so every exponent is <= 0.
    template <class S>
    S lt_pos_shifted(S q, double x) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y > 0 && c.y >= x) out += c.w * std::exp(-q * (c.y - x));
                break;
            case JumpKind::exp_pos: {
                S d = c.rate + q;
                if (!(detail::re(d) > 0)) throw DomainError("lt_pos_shifted: Re q <= -r_pos");
                double l = std::max(x, c.cutoff);
                out += c.intensity * c.rate * std::exp(-c.rate * l - q * (l - x)) / d;
                break;
            }
            case JumpKind::exp_neg:
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) {
                    double l = std::max(p->a, x);
                    if (p->b > l)
                        out += p->intensity / (p->b - p->a) *
                               num::powexp_integral(0, q, l - x, p->b - x);
                }
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] > 0 && c.points[i] >= x)
                        out += c.weights[i] * std::exp(-q * (c.points[i] - x));
                break;
            }
        }
        return out;
    }

    /// integral over [x, inf) of (e^{-u(y-x)} - e^{-v(y-x)})/(u - v) nu(dy),
    /// continuous through u = v. x = 0 gives the full positive-side divided
    /// difference.
    template <class S>
    S dd_pos_shifted(S u, S v, double x) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y > 0 && c.y >= x) out += c.w * detail::dd_exp(u, v, c.y - x);
                break;
            case JumpKind::exp_pos: {
                S bu = c.rate + u, bv = c.rate + v;
                if (!(detail::re(bu) > 0) || !(detail::re(bv) > 0))
                    throw DomainError("dd_pos_shifted: Re u or Re v <= -r_pos");
                double t0 = std::max(x, c.cutoff) - x;
                // product rule on e^{-(rate+s)t0}/(rate+s)
                S term = std::exp(-c.rate * t0) * detail::dd_exp(u, v, t0) / bu -
                         std::exp(-bv * t0) / (bu * bv);
                out += c.intensity * c.rate * std::exp(-c.rate * x) * term;
                break;
            }
            case JumpKind::exp_neg:
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) {
                    double l = std::max(p->a, x);
                    if (p->b > l) {
                        double t1 = l - x, t2 = p->b - x;
                        double dens = p->intensity / (p->b - p->a);
                        S d = u - v;
                        if (std::abs(d) * (1.0 + t2) < 1e-4) {
                            // -(M1 + d^2 M3 / 24) around the midpoint rate
                            S m = (u + v) * 0.5;
                            S M1 = num::powexp_integral(1, m, t1, t2);
                            S M3 = num::powexp_integral(3, m, t1, t2);
                            out += dens * -(M1 + d * d * M3 / 24.0);
                        } else {
                            S phi_u = num::powexp_integral(0, u, t1, t2);
                            S phi_v = num::powexp_integral(0, v, t1, t2);
                            out += dens * (phi_u - phi_v) / d;
                        }
                    }
                }
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] > 0 && c.points[i] >= x)
                        out += c.weights[i] * detail::dd_exp(u, v, c.points[i] - x);
                break;
            }
        }
        return out;
    }

    /// integral over [0, x) of e^{-sL (x-y)} e^{-sR y} nu(dy): both weights
    /// anchored inside [0, x], so all exponents are <= 0 for Re sL, sR >= 0.
    template <class S>
    S bridge_pos(S sL, S sR, double x) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y > 0 && c.y < x) out += c.w * std::exp(-sL * (x - c.y) - sR * c.y);
                break;
            case JumpKind::exp_pos: {
                double cu = c.cutoff;
                if (x <= cu) break;
                S d = c.rate + sR - sL;
                S A = std::exp(-sL * (x - cu) - (c.rate + sR) * cu);
                S val;
                if (std::abs(d) * (x - cu) < 1e-4) {
                    val = A * (x - cu) * num::eta0(-d * (x - cu));
                } else {
                    val = (A - std::exp(-(c.rate + sR) * x)) / d;
                }
                out += c.intensity * c.rate * val;
                break;
            }
            case JumpKind::exp_neg:
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) {
                    double y1 = p->a, y2 = std::min(p->b, x);
                    if (y2 > y1) {
                        double dens = p->intensity / (p->b - p->a);
                        S d = sL - sR; // exponent -sL(x-y) - sR y has slope d in y
                        S z1 = std::exp(-sL * (x - y1) - sR * y1);
                        if (std::abs(d) * (y2 - y1) < 1e-4) {
                            out += dens * z1 * (y2 - y1) * num::eta0(d * (y2 - y1));
                        } else {
                            S z2 = std::exp(-sL * (x - y2) - sR * y2);
                            out += dens * (z2 - z1) / d;
                        }
                    }
                }
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] > 0 && c.points[i] < x)
                        out += c.weights[i] * std::exp(-sL * (x - c.points[i]) - sR * c.points[i]);
                break;
            }
        }
        return out;
    }

    /// integral over (0, x) of y^k e^{-s y} nu(dy); x may be +inf (then the
    /// exponential components need Re s > -r_pos).
    template <class S>
    S mom_pos(int k, S s, double x) const {
        S out(0);
        for (const auto& c : comps_) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y > 0 && c.y < x) out += c.w * std::pow(c.y, k) * std::exp(-s * c.y);
                break;
            case JumpKind::exp_pos:
                if (x > c.cutoff)
                    out += c.intensity * c.rate * num::powexp_integral(k, c.rate + s, c.cutoff, x);
                break;
            case JumpKind::exp_neg:
                break;
            case JumpKind::uniform:
                if (auto p = c.uniform_pos_piece()) {
                    double h = std::min(p->b, x);
                    if (h > p->a)
                        out += p->intensity / (p->b - p->a) * num::powexp_integral(k, s, p->a, h);
                }
                break;
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] > 0 && c.points[i] < x)
                        out += c.weights[i] * std::pow(c.points[i], k) * std::exp(-s * c.points[i]);
                break;
            }
        }
        return out;
    }

private:
    std::vector<JumpComponent> comps_;
    std::vector<double> cum_mass_;
    double lambda_ = 0.0;
    double mean_ = 0.0;
    double pos_mass_ = 0.0;
    double neg_mass_ = 0.0;
    double r_pos_ = num::inf;
    double r_neg_ = num::inf;
};

} // namespace levypass
