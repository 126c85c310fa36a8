#pragma once

// Laplace-domain side: the operator R collecting the negative-jump
// contribution, the transform identity satisfied by F (usable as an
// independent residual check of a grid solution), the explicit transform for
// spectrally positive measures, the asymptotic constant C0 in
// F(x) ~ C0 e^{-gamma0 x}, and the positive Wiener-Hopf factor.

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "grid_function.hpp"
#include "jump_measure.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "roots.hpp"

namespace levypass {

/// Grid walk shared by one R evaluation: T0(u) = Int_0^u h, its cumulative,
/// and P(u) = Int_0^u e^{q(u-t)} T0(t) dt, all exact for the interpolant of h
/// (T0 is piecewise quadratic) and extended past x_max with the tail closed
/// forms. The observable is W(u) = e^{qu} T_q(u) - T0(u) = q P(u), the inner
/// integral of R against a jump of size -u.
class RWalk {
public:
    RWalk(const GridFunction& h, std::complex<double> q) : g_(&h), q_(q) {
        int n = h.size();
        double hh = h.h();
        const auto& v = h.values();
        t0_.assign(static_cast<std::size_t>(n), 0.0);
        u0_.assign(static_cast<std::size_t>(n), 0.0);
        p_.assign(static_cast<std::size_t>(n), 0.0);
        std::complex<double> eqh = std::exp(q * hh);
        for (int i = 0; i + 1 < n; ++i) {
            double t1 = v[i], t2 = 0.5 * (v[i + 1] - v[i]) / hh;
            t0_[i + 1] = t0_[i] + hh * (t1 + t2 * hh);
            u0_[i + 1] = u0_[i] + hh * (t0_[i] + hh * (0.5 * t1 + t2 * hh / 3.0));
            p_[i + 1] = eqh * (p_[i] + cell(i, hh));
        }
    }

    double T0(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= xm()) return tail_t0(u - xm());
        auto [j, d] = locate(u);
        double t1 = val(j), t2 = 0.5 * (val(j + 1) - val(j)) / g_->h();
        return t0_[j] + d * (t1 + t2 * d);
    }

    /// Int_a^b T0.
    double IT0(double a, double b) const { return U0(b) - U0(a); }

    std::complex<double> P(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= xm()) {
            double d = u - xm();
            return std::exp(q_ * d) * (p_.back() + tail_cell(d));
        }
        auto [j, d] = locate(u);
        return std::exp(q_ * d) * (p_[static_cast<std::size_t>(j)] + cell(j, d));
    }

    std::complex<double> W(double u) const { return q_ * P(u); }
    /// T_q(u) = Int_0^u e^{-q b} h(b) db, recovered from W.
    std::complex<double> Tq(double u) const { return std::exp(-q_ * u) * (W(u) + T0(u)); }

    bool used_tail() const { return tail_used_; }

private:
    double xm() const { return g_->x_max(); }
    double val(int i) const { return g_->values()[static_cast<std::size_t>(i)]; }

    std::pair<int, double> locate(double u) const {
        int j = static_cast<int>(u / g_->h());
        if (j > g_->size() - 2) j = g_->size() - 2;
        double d = u - g_->h() * j;
        return {j, d < 0.0 ? 0.0 : d};
    }

    // Int over [x_j, x_j + d] of e^{q(x_j + d - t)} T0(t) dt, without the
    // leading e^{qd} (the callers fold it into their recurrence step).
    std::complex<double> cell(int j, double d) const {
        double t1 = val(j), t2 = 0.5 * (val(j + 1) - val(j)) / g_->h();
        std::complex<double> z = -q_ * d;
        return d * (t0_[static_cast<std::size_t>(j)] * num::eta0(z) +
                    d * (t1 * num::eta1(z) + t2 * d * num::eta2(z)));
    }

    double tail_t0(double d) const {
        tail_used_ = true;
        double gt = g_->tail_rate(), vn = val(g_->size() - 1);
        if (gt > 0.0) return t0_.back() + vn / gt * -std::expm1(-gt * d);
        return t0_.back() + vn * d;
    }

    double U0(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= xm()) {
            double d = u - xm();
            double gt = g_->tail_rate(), vn = val(g_->size() - 1);
            tail_used_ = true;
            if (gt > 0.0)
                return u0_.back() + (t0_.back() + vn / gt) * d + vn / (gt * gt) * std::expm1(-gt * d);
            return u0_.back() + t0_.back() * d + 0.5 * vn * d * d;
        }
        auto [j, d] = locate(u);
        double t1 = val(j), t2 = 0.5 * (val(j + 1) - val(j)) / g_->h();
        return u0_[static_cast<std::size_t>(j)] +
               d * (t0_[static_cast<std::size_t>(j)] + d * (0.5 * t1 + t2 * d / 3.0));
    }

    // T0 past x_max is A + B(1 - e^{-gt s}) (or linear when gt = 0); its
    // damped integral in closed form.
    std::complex<double> tail_cell(double d) const {
        tail_used_ = true;
        double gt = g_->tail_rate(), vn = val(g_->size() - 1);
        double A = t0_.back();
        if (gt > 0.0) {
            double B = vn / gt;
            return d * ((A + B) * num::eta0(-q_ * d) - B * num::eta0(-(q_ + gt) * d));
        }
        return d * (A * num::eta0(-q_ * d) + vn * d * num::eta1(-q_ * d));
    }

    const GridFunction* g_;
    std::complex<double> q_;
    std::vector<double> t0_, u0_;
    std::vector<std::complex<double>> p_;
    mutable bool tail_used_ = false;
};

/// R h(q) = Int_{y<0} nu(dy) Int_0^{-y} (e^{-q(b+y)} - 1) h(b) db: the
/// negative-jump correction entering the transform identity. Outer integral
/// closed-form per component; inner integral exact for the interpolant of h.
/// Jumps reaching past x_max are computed through the tail extrapolation and
/// flagged via tail_flag. R(0) = 0 identically.
inline std::complex<double> apply_r(const LevyModel& m, const GridFunction& h,
                                    std::complex<double> q, bool* tail_flag = nullptr) {
    if (q == 0.0) return 0.0;
    std::complex<double> out(0.0);
    if (!m.nu.has_negative_jumps()) return out;
    RWalk walk(h, q);
    bool unbounded_jump = false;  // exponential sizes always reach past x_max

    auto neg_atom = [&](double y, double w) { out += w * walk.W(-y); };

    for (const auto& c : m.nu.components()) {
        switch (c.kind) {
        case JumpKind::atom:
            if (c.y < 0.0) neg_atom(c.y, c.w);
            break;
        case JumpKind::exp_neg: {
            double beta = c.rate, cu = c.cutoff;
            if (!(q.real() < beta))
                throw DomainError("apply_r: Re q at or beyond an exp-negative rate, the "
                                  "defining integral diverges");
            std::complex<double> bq = beta - q;
            // by parts: the jump-size integral collapses onto the cutoff
            // values of T_q and T0 plus the damped mass of h past the cutoff
            double hb = grid_damped_total(h, beta) - grid_damped_partial(h, beta, cu);
            out += c.intensity * (beta * std::exp(-bq * cu) * walk.Tq(cu) / bq -
                                  std::exp(-beta * cu) * walk.T0(cu) + q * hb / bq);
            unbounded_jump = true;
            break;
        }
        case JumpKind::uniform:
            if (auto p = c.uniform_neg_piece()) {
                double dens = c.intensity / (c.b - c.a);
                double lo = -p->b, hi = -p->a;
                out += dens * (walk.P(hi) - walk.P(lo) - walk.IT0(lo, hi));
            }
            break;
        case JumpKind::tabulated:
            for (std::size_t i = 0; i < c.points.size(); ++i)
                if (c.points[i] < 0.0) neg_atom(c.points[i], c.weights[i]);
            break;
        case JumpKind::exp_pos:
            break;
        }
    }
    if (tail_flag) *tail_flag = *tail_flag || walk.used_tail() || unbounded_jump;
    return out;
}

/// Explicit transform of F for spectrally positive measures: everything on
/// the right-hand side of the transform identity is then known. Valid for any
/// complex q inside the analyticity strip (not only Re q > 0, which the
/// asymptotic checks rely on); the removable point q = gamma0* is crossed by
/// a symmetric average just off the axis.
inline std::complex<double> F_hat_explicit_pos(const LevyModel& m, double theta, double mu,
                                               double rho, std::complex<double> q) {
    if (m.nu.has_negative_jumps())
        throw DomainError("F_hat_explicit_pos: negative jumps present, no explicit transform");
    // Certain passage with no overshoot/undershoot weight: F == 1. (For
    // mu, rho > 0 the general formula below remains the right answer even
    // when passage is certain.)
    if (theta == 0.0 && m.mean_x1() >= 0.0 && mu == 0.0 && rho == 0.0) return 1.0 / q;
    RootReport roots = find_roots(m, theta);
    double g0s = roots.gamma0_star;
    double dd_s = m.nu.dd_pos_shifted(g0s + rho, mu, 0.0);
    auto value = [&](std::complex<double> z) {
        std::complex<double> num =
            0.5 * (z - g0s) +
            m.nu.dd_pos_shifted(z + rho, std::complex<double>(mu), 0.0) - dd_s;
        return num / (m.phi(z) - theta);
    };
    double scale = 1.0 + std::abs(g0s);
    if (std::abs(q - g0s) < 1e-4 * scale) {
        // 0/0 point: numerator and phi - theta share the simple root
        std::complex<double> off(0.0, 1e-3 * scale);
        return 0.5 * (value(q + off) + value(q - off));
    }
    return value(q);
}

/// Residual of the transform identity at q for a grid solution F:
///   (phi(q) - theta) F_hat(q) - [ (q - g0*)/2 + dd-terms + RF(q) - RF(g0*) ].
/// Zero in exact arithmetic when F is the true solution; the scale of the
/// left-hand side is the natural normalizer.
inline std::complex<double> equa_laplace_residual(const LevyModel& m, double theta, double mu,
                                                  double rho, const GridFunction& F,
                                                  std::complex<double> q,
                                                  bool* tail_flag = nullptr) {
    if (!(q.real() > 0.0))
        throw DomainError("equa_laplace_residual: Re q must be positive");
    RootReport roots = find_roots(m, theta);
    double g0s = roots.gamma0_star;
    std::complex<double> lhs = (m.phi(q) - theta) * grid_damped_total(F, q);
    std::complex<double> rhs =
        0.5 * (q - g0s) +
        m.nu.dd_pos_shifted(q + rho, std::complex<double>(mu), 0.0) -
        m.nu.dd_pos_shifted(g0s + rho, mu, 0.0) + apply_r(m, F, q, tail_flag) -
        apply_r(m, F, std::complex<double>(g0s), tail_flag);
    return lhs - rhs;
}

struct ResidualReport {
    std::complex<double> q;
    std::complex<double> residual;
    double rel = 0.0;       // |residual| / |(phi(q) - theta) F_hat(q)|
    bool tail_used = false;
};

inline ResidualReport equa_laplace_check(const LevyModel& m, double theta, double mu,
                                         double rho, const GridFunction& F,
                                         std::complex<double> q) {
    ResidualReport rep;
    rep.q = q;
    rep.residual = equa_laplace_residual(m, theta, mu, rho, F, q, &rep.tail_used);
    double scale = std::abs((m.phi(q) - theta) * grid_damped_total(F, q));
    rep.rel = scale > 0.0 ? std::abs(rep.residual) / scale : std::abs(rep.residual);
    return rep;
}

enum class C0Branch { regular, critical };

struct C0Constant {
    double theta = 0.0, mu = 0.0, rho = 0.0;
    double value = 0.0;
    C0Branch branch = C0Branch::regular;
};

/// Constant of the exponential tail F(x) ~ C0 e^{-gamma0(theta) x}, spectrally
/// positive measures only. Regular branch whenever theta > 0 or E(X_1) != 0;
/// the critical (zero-mean, theta = 0) branch is a different closed form.
inline C0Constant C0(const LevyModel& m, double theta, double mu, double rho) {
    if (m.nu.has_negative_jumps())
        throw HypothesisError("C0: tail constant formula needs a spectrally positive measure");
    C0Constant out;
    out.theta = theta;
    out.mu = mu;
    out.rho = rho;
    double mean = m.mean_x1();
    if (theta == 0.0 && mean == 0.0) {
        out.branch = C0Branch::critical;
        double eps = rho - mu;
        double phi2 = m.phi_d2(0.0);
        if (std::abs(eps) < 1e-3) {
            double m2 = m.nu.mom_pos(2, 0.0, num::inf);
            double m3 = m.nu.mom_pos(3, 0.0, num::inf);
            double m4 = m.nu.mom_pos(4, 0.0, num::inf);
            double m5 = m.nu.mom_pos(5, 0.0, num::inf);
            out.value = (1.0 + m2 + eps * (m3 / 3.0 + eps * (m4 / 12.0 + eps * m5 / 60.0))) / phi2;
        } else {
            // Int (1 - e^{eps y} + eps y) nu(dy) over y > 0; lt_pos throws
            // when eps reaches the exponential-moment radius
            double integral = m.nu.pos_mass() - m.nu.lt_pos(-eps, 0.0, num::inf) +
                              eps * m.nu.mom_pos(1, 0.0, num::inf);
            out.value = (1.0 - 2.0 / (eps * eps) * integral) / phi2;
        }
        return out;
    }
    out.branch = C0Branch::regular;
    RootReport roots = find_roots(m, theta);
    double g0 = roots.gamma0, g0s = roots.gamma0_star;
    double num = -0.5 * (g0 + g0s) + m.nu.dd_pos_shifted(rho - g0, mu, 0.0) -
                 m.nu.dd_pos_shifted(g0s + rho, mu, 0.0);
    out.value = num / m.phi_d1(-g0);
    return out;
}

/// Positive Wiener-Hopf factor psi_theta^+(q) = E e^{iq S}, S the running
/// supremum at an independent exponential time: by parts against
/// P(S >= x) = F(theta,0,0,x) this is 1 + iq F_hat(theta,0,0,-iq). (Brownian
/// check: 1 + iq/(gamma0* - iq) = gamma0*/(gamma0* - iq), the characteristic
/// function of an exponential; the +iq argument sometimes quoted gives
/// modulus > 1 and cannot be a characteristic function.) Evaluated just off
/// the imaginary axis; a drift of the value between Re = 1e-6 and 1e-8 marks
/// the limit as unstable.
inline std::complex<double> wiener_hopf_plus(const LevyModel& m, double theta, double q_real) {
    if (!(theta > 0.0)) throw HypothesisError("wiener_hopf_plus: theta must be positive");
    if (q_real == 0.0) return 1.0;
    auto at = [&](double re) {
        std::complex<double> z(re, -q_real);
        return 1.0 + std::complex<double>(0.0, q_real) * F_hat_explicit_pos(m, theta, 0.0, 0.0, z);
    };
    std::complex<double> fine = at(1e-8);
    if (std::abs(fine - at(1e-6)) > 1e-4 * (1.0 + std::abs(fine)))
        throw DomainError("wiener_hopf_plus: boundary limit did not stabilize");
    return fine;
}

/// Same factor from a grid solution, for measures with a negative part.
inline std::complex<double> wiener_hopf_plus(const GridFunction& F, double theta, double q_real) {
    if (!(theta > 0.0)) throw HypothesisError("wiener_hopf_plus: theta must be positive");
    if (q_real == 0.0) return 1.0;
    auto at = [&](double re) {
        std::complex<double> z(re, -q_real);
        return 1.0 + std::complex<double>(0.0, q_real) * grid_damped_total(F, z);
    };
    std::complex<double> fine = at(1e-8);
    if (std::abs(fine - at(1e-6)) > 1e-4 * (1.0 + std::abs(fine)))
        throw DomainError("wiener_hopf_plus: boundary limit did not stabilize");
    return fine;
}

} // namespace levypass
