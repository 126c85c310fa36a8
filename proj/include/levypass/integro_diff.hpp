#pragma once

// x-space certificate: the solution satisfies a linear integro-differential
// equation with an inhomogeneity carrying the jumps that clear the level in
// one go, plus a boundary derivative at 0+ in closed form up to a weighted
// integral of F against the negative jump sizes. Both sides are computable
// from a grid solution, giving an independent check of the solver route.

#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "grid_function.hpp"
#include "jump_measure.hpp"
#include "laplace.hpp"
#include "model.hpp"
#include "roots.hpp"

namespace levypass {

struct IDCheck {
    double x = 0.0;
    double residual = 0.0;
    double scale = 0.0;  // largest single term entering the balance at x
    double rel = 0.0;
};

/// Residual of
///   F''/2 + c0 F' - (lambda + theta) F + Int_{y<x} F(x-y) nu(dy)
///     + e^{-rho x} Int_{y>x} e^{-mu(y-x)} nu(dy) = 0
/// at the interior grid nodes, derivatives by central differences. The
/// convolution reuses the interpolant-exact sweeps; arguments past x_max go
/// through the exponential tail.
inline std::vector<IDCheck> equa_id_residual(const LevyModel& m, double theta, double mu,
                                             double rho, const GridFunction& F) {
    if (F.size() < 3) throw ConfigError("equa_id_residual: need at least 3 grid points");
    Sweeps::Request req;
    for (const auto& c : m.nu.components()) {
        if (c.kind == JumpKind::exp_pos) req.prefix.push_back(c.rate);
        if (c.kind == JumpKind::exp_neg) req.suffix.push_back(c.rate);
    }
    Sweeps sw(F, req);

    double lam = m.lambda();
    double h = F.h();
    const auto& v = F.values();

    auto conv = [&](double x) {
        double out = 0.0;
        for (const auto& c : m.nu.components()) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y < x) out += c.w * F(x - c.y);
                break;
            case JumpKind::exp_pos:
                if (x > c.cutoff)
                    out += c.intensity * c.rate * std::exp(-c.rate * c.cutoff) *
                           sw.prefix(c.rate, x - c.cutoff);
                break;
            case JumpKind::exp_neg:
                out += c.intensity * c.rate * std::exp(-c.rate * c.cutoff) *
                       sw.suffix(c.rate, x + c.cutoff);
                break;
            case JumpKind::uniform: {
                double dens = c.intensity / (c.b - c.a);
                if (auto p = c.uniform_pos_piece(); p && x > p->a)
                    out += dens * (sw.cum(0.0, x - p->a) - sw.cum(0.0, x - p->b));
                if (auto p = c.uniform_neg_piece())
                    out += dens * (sw.cum(0.0, x - p->a) - sw.cum(0.0, x - p->b));
                break;
            }
            case JumpKind::tabulated:
                for (std::size_t i = 0; i < c.points.size(); ++i)
                    if (c.points[i] < x) out += c.weights[i] * F(x - c.points[i]);
                break;
            }
        }
        return out;
    };

    std::vector<IDCheck> out;
    out.reserve(static_cast<std::size_t>(F.size() - 2));
    for (int i = 1; i + 1 < F.size(); ++i) {
        double x = F.x(i);
        double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
        double terms[5] = {0.5 * d2, m.c0 * d1, -(lam + theta) * v[i], conv(x),
                           std::exp(-rho * x) * m.nu.lt_pos_shifted(mu, x)};
        IDCheck chk;
        chk.x = x;
        chk.residual = num::pairwise_sum(terms, 5);
        for (double t : terms) chk.scale = std::max(chk.scale, std::abs(t));
        chk.rel = chk.scale > 0.0 ? std::abs(chk.residual) / chk.scale : std::abs(chk.residual);
        out.push_back(chk);
    }
    return out;
}

/// One-sided second-order derivative of the grid solution at 0.
inline double fprime0_grid(const GridFunction& F) {
    if (F.size() < 3) throw ConfigError("fprime0_grid: need at least 3 grid points");
    const auto& v = F.values();
    return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * F.h());
}

/// Boundary derivative F'(0+) = -2 [ c0 + g0*/2 + dd-term + Int_{y<0} nu(dy)
/// e^{-g0* y} T_{g0*}(-y) ], with T_q(u) = Int_0^u e^{-qb} F(b) db taken from
/// the grid solution. Spectrally positive measures drop the last term and the
/// value is fully explicit.
inline double fprime0_formula(const LevyModel& m, double theta, double mu, double rho,
                              const GridFunction& F) {
    RootReport roots = find_roots(m, theta);
    double q = roots.gamma0_star;
    double neg = 0.0;
    if (m.nu.has_negative_jumps()) {
        RWalk walk(F, std::complex<double>(q));
        auto neg_atom = [&](double y, double w) {
            neg += w * std::exp(-q * y) * walk.Tq(-y).real();
        };
        for (const auto& c : m.nu.components()) {
            switch (c.kind) {
            case JumpKind::atom:
                if (c.y < 0.0) neg_atom(c.y, c.w);
                break;
            case JumpKind::exp_neg: {
                double beta = c.rate, cu = c.cutoff;
                if (!(q < beta))
                    throw DomainError("fprime0_formula: gamma0* at or beyond an "
                                      "exp-negative rate");
                double hb = grid_damped_total(F, beta) - grid_damped_partial(F, beta, cu);
                neg += c.intensity * beta / (beta - q) *
                       (std::exp(-(beta - q) * cu) * walk.Tq(cu).real() + hb);
                break;
            }
            case JumpKind::uniform:
                if (auto p = c.uniform_neg_piece()) {
                    double dens = c.intensity / (c.b - c.a);
                    // Int_lo^hi e^{qs} T_q(s) ds collapses to P by parts
                    neg += dens * (walk.P(-p->a).real() - walk.P(-p->b).real());
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
    }
    return -2.0 * (m.c0 + 0.5 * q + m.nu.dd_pos_shifted(q + rho, mu, 0.0) + neg);
}

} // namespace levypass
