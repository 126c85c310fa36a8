#pragma once

// Roots of phi(q) = theta. The negative root -gamma0(theta) and the positive
// root gamma0_star(theta) are bracketed by the zeros of the quadratic
// C_theta(q) = q^2 + 2 c0 q - 2(lambda + theta), which sit at -c0 - alpha and
// alpha - c0, because 2(phi - theta) = C_theta + 2 nu_hat and nu_hat >= 0.

#include <cmath>

#include "model.hpp"
#include "numerics.hpp"

namespace levypass {

struct RootReport {
    double theta = 0;
    double gamma0 = 0;      // the negative root of phi = theta is -gamma0
    double gamma0_star = 0; // the positive root
    double bracket_neg[2] = {0, 0}; // search interval on the gamma0 axis
    double bracket_pos[2] = {0, 0};
    double residual_neg = 0; // |phi(-gamma0) - theta|
    double residual_pos = 0;
};

namespace detail {

/// Root of f(g) = phi(sign * g) - theta for g in (0, hi_limit), where f(0) <= 0
/// and f is convex with f -> +infinity (or >= 0) at the right end. strip_edge
/// is the transform's own convergence bound on this side (+inf if none).
template <class F, class DF>
double positive_root_of_side(F&& f, DF&& df, double c_zero, double strip_edge, double theta,
                             bool theta_zero_interior, double* bracket) {
    const double ftol = 1e-12 * std::max(1.0, theta);

    double lo = 0.0;
    double flo = -theta;
    if (theta_zero_interior) {
        // theta = 0 with a strictly interior root: f(0) = 0, f'(0) < 0. Walk
        // down from the upper end until f goes negative.
        lo = 0.5 * std::min(c_zero, strip_edge);
        flo = f(lo);
        int guard = 0;
        while (flo >= 0.0 && ++guard < 1024) {
            lo *= 0.5;
            flo = f(lo);
        }
        if (flo >= 0.0) throw NoRootError("find_roots: no interior sign change at theta = 0");
    }

    double hi, fhi;
    if (c_zero < strip_edge) {
        hi = c_zero;
        fhi = f(hi);
        if (fhi < 0.0) {
            // f(c_zero) = nu_hat at the C_theta zero, >= 0 exactly; a small
            // negative value here is pure rounding (lambda = 0 puts the root
            // exactly at the bracket edge). Widen by a relative slack.
            hi = c_zero * (1.0 + 1e-9) + 1e-12;
            if (hi >= strip_edge) hi = 0.5 * (c_zero + strip_edge);
            fhi = f(hi);
        }
    } else {
        // The C_theta zero lies outside the strip; nu_hat blows up at the
        // strip edge, so scan toward it until phi - theta turns positive.
        hi = 0.5 * (lo + strip_edge);
        fhi = f(hi);
        int guard = 0;
        while (fhi < 0.0 && ++guard < 200) {
            hi = 0.5 * (hi + strip_edge);
            fhi = f(hi);
        }
    }
    if (fhi < 0.0) throw NoRootError("find_roots: no sign change inside the admissible bracket");

    bracket[0] = lo;
    bracket[1] = hi;
    return num::newton_bracketed(f, df, lo, hi, flo, fhi, ftol);
}

} // namespace detail

/// Both roots of phi(q) = theta. At theta = 0 the boundary cases are exact:
/// gamma0(0) = 0 when E(X_1) >= 0 and gamma0_star(0) = 0 when E(X_1) <= 0.
inline RootReport find_roots(const LevyModel& model, double theta) {
    if (!(theta >= 0)) throw ConfigError("find_roots: theta must be >= 0");
    RootReport rep;
    rep.theta = theta;
    const double alpha = model.alpha_theta(theta);
    const double mean = model.mean_x1();

    // Negative side: g = gamma0, f(g) = phi(-g) - theta on (0, c0 + alpha).
    if (theta == 0.0 && mean >= 0.0) {
        rep.gamma0 = 0.0;
        rep.residual_neg = 0.0;
    } else {
        auto f = [&](double g) { return model.phi(-g) - theta; };
        auto df = [&](double g) { return -model.phi_d1(-g); };
        rep.gamma0 = detail::positive_root_of_side(f, df, model.c0 + alpha, model.r_nu(), theta,
                                                   theta == 0.0, rep.bracket_neg);
        rep.residual_neg = std::abs(f(rep.gamma0));
    }

    // Positive side: f(s) = phi(s) - theta on (0, alpha - c0).
    if (theta == 0.0 && mean <= 0.0) {
        rep.gamma0_star = 0.0;
        rep.residual_pos = 0.0;
    } else {
        auto f = [&](double s) { return model.phi(s) - theta; };
        auto df = [&](double s) { return model.phi_d1(s); };
        rep.gamma0_star = detail::positive_root_of_side(f, df, alpha - model.c0, model.r_nu_star(),
                                                        theta, theta == 0.0, rep.bracket_pos);
        rep.residual_pos = std::abs(f(rep.gamma0_star));
    }
    return rep;
}

} // namespace levypass
