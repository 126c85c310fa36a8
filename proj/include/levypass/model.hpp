#pragma once

// The jump-diffusion model X_t = B_t - c0 t + J_t (unit Brownian volatility),
// its Laplace exponent phi and the derived analytic quantities everything
// else is phrased in.

#include <cmath>
#include <utility>

#include "jump_measure.hpp"

namespace levypass {

struct LevyModel {
    double c0 = 0.0;
    JumpMeasure nu;

    LevyModel() = default;
    LevyModel(double drift, JumpMeasure measure) : c0(drift), nu(std::move(measure)) {}

    double lambda() const { return nu.mass(); }
    double mean_x1() const { return -c0 + nu.mean(); }
    /// lt(q) of the measure converges on the open strip (-r_nu, r_nu_star).
    double r_nu() const { return nu.r_pos(); }
    double r_nu_star() const { return nu.r_neg(); }

    /// alpha_theta = sqrt(c0^2 + 2(lambda + theta)); the no-jump passage rate
    /// is c0 + alpha_theta.
    double alpha_theta(double theta) const {
        return std::sqrt(c0 * c0 + 2.0 * (lambda() + theta));
    }

    /// phi(q) = q^2/2 + c0 q + nu_hat(q) - lambda, so E e^{-q X_t} = e^{t phi(q)}.
    /// Real q gives real results; phi is convex on the real strip.
    template <class S>
    S phi(S q) const {
        return q * q * 0.5 + c0 * q + nu.lt(q) - lambda();
    }
    template <class S>
    S phi_d1(S q) const {
        return q + c0 + nu.lt_d1(q);
    }
    template <class S>
    S phi_d2(S q) const {
        return S(1) + nu.lt_d2(q);
    }

    template <class S>
    S nu_hat(S q) const {
        return nu.lt(q);
    }
    template <class S>
    S nu_hat_plus(S q) const {
        return nu.lt_pos(q, 0.0, num::inf);
    }

    /// Removes jump mass inside (-1/n, 1/n); the entry point for
    /// approximating infinite-activity measures externally. Idempotent once
    /// the measure is already restricted.
    LevyModel truncate_measure(int n) const {
        if (n < 1) throw ConfigError("truncate_measure: n must be >= 1");
        return LevyModel(c0, nu.truncated(1.0 / n));
    }
};

} // namespace levypass
