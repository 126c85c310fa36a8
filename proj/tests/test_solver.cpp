#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "levypass/solver.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace levypass;
using Catch::Approx;

TEST_CASE("F0 closed form") {
    CHECK(eval_F0(mdl::kitchen_sink_model(), 1.3, 0.0) == 1.0);
    CHECK(eval_F0(mdl::brownian(0.0), 2.0, 1.0) == Approx(std::exp(-2.0)).epsilon(1e-14));
    LevyModel m{1.0, JumpMeasure({JumpComponent::make_atom(1.0, 1.0)})};
    CHECK(eval_F0(m, 0.5, 1.0) == Approx(std::exp(-3.0)).epsilon(1e-14));
}

TEST_CASE("F1 vanishes without upward jumps") {
    CHECK(eval_F1(mdl::brownian(0.3), 1.0, 0.5, 0.2, 1.4) == 0.0);
    CHECK(eval_F1(mdl::neg_exp_model(), 1.0, 0.5, 0.2, 1.4) == 0.0);
    CHECK(eval_F1(mdl::kitchen_sink_model(), 1.0, 0.5, 0.2, 0.0) == 0.0);
}

TEST_CASE("F1 hand value for a unit atom") {
    // atom(1,1), c0=0, theta=1: alpha=2, and the kernel integral collapses to
    // (e^{-1} - e^{-3})^2 / 4 at x=2
    LevyModel m{0.0, JumpMeasure({JumpComponent::make_atom(1.0, 1.0)})};
    double want = std::pow(std::exp(-1.0) - std::exp(-3.0), 2) / 4.0;
    CHECK(eval_F1(m, 1.0, 0.0, 0.0, 2.0) == Approx(want).epsilon(1e-13));
    CHECK(eval_F1(m, 1.0, 0.0, 0.0, 2.0) ==
          Approx(oracles::f1_oracle(m, 1.0, 0.0, 0.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("F1 against the kernel quadrature") {
    LevyModel m = mdl::kitchen_sink_model();
    double theta = 0.8, mu = 0.4, rho = 0.15;
    for (double x : {0.3, 1.0, 2.5}) {
        double want = oracles::f1_oracle(m, theta, mu, rho, x);
        CHECK(eval_F1(m, theta, mu, rho, x) == Approx(want).margin(1e-9));
    }
}

TEST_CASE("F1 through the coincident-rate branch") {
    LevyModel m = mdl::claims_model();
    double theta = 1.0, mu = 0.2;
    double sigma = m.c0 + m.alpha_theta(theta);
    // rho chosen so mu - rho + sigma crosses zero
    for (double eps : {0.0, 1e-6, 5e-5, 1e-3}) {
        double rho = sigma + mu - eps;
        double want = oracles::f1_oracle(m, theta, mu, rho, 1.2);
        CHECK(eval_F1(m, theta, mu, rho, 1.2) == Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("Lambda against the kernel quadrature") {
    LevyModel m = mdl::kitchen_sink_model();
    double theta = 0.8;
    GridFunction g(4.0, 201, 0.4);
    for (int i = 0; i < g.size(); ++i) g[i] = std::exp(-0.4 * g.x(i));
    GridFunction lg = apply_lambda(m, theta, g);
    CHECK(lg[0] == 0.0);
    auto gf = [&](double b) { return g(b); };
    for (int i : {5, 25, 85, 160, 200}) {
        double want = oracles::lambda_oracle(m, theta, gf, g.x(i));
        CHECK(lg[i] == Approx(want).margin(2e-8));
    }
}

TEST_CASE("Lambda of the constant function approaches lambda/(lambda+theta)") {
    LevyModel m{0.0, JumpMeasure({JumpComponent::make_atom(-1.0, 1.0)})};
    GridFunction one(6.0, 601, 0.0);
    for (int i = 0; i < one.size(); ++i) one[i] = 1.0;
    GridFunction lg = apply_lambda(m, 1.0, one);
    double sup = 0.0;
    for (int i = 0; i < lg.size(); ++i) sup = std::max(sup, lg[i]);
    CHECK(sup <= 0.5 + 1e-9);
    CHECK(lg[lg.size() - 1] >= 0.5 - 5e-3);
}

TEST_CASE("Lambda is a weighted-norm contraction") {
    LevyModel m = mdl::two_sided_model();
    double theta = 1.0, gamma = 0.25;
    double c = contraction_factor(m, theta, gamma);
    REQUIRE(c < 1.0);
    GridFunction g1(8.0, 401, 0.3), g2(8.0, 401, 0.3);
    for (int i = 0; i < g1.size(); ++i) {
        double x = g1.x(i);
        g1[i] = std::exp(-0.3 * x);
        g2[i] = 0.8 * std::exp(-0.3 * x) * (1.0 + 0.1 * std::sin(3.0 * x));
    }
    double before = GridFunction::wdiff(g1, g2, gamma);
    double after = GridFunction::wdiff(apply_lambda(m, theta, g1), apply_lambda(m, theta, g2),
                                       gamma);
    CHECK(after <= (c + 0.01) * before);
}

TEST_CASE("contraction factor shape and weight selection") {
    LevyModel m = mdl::two_sided_model();
    double theta = 0.7;
    double gamma0 = find_roots(m, theta).gamma0;
    double g = pick_gamma(m, theta, gamma0);
    CHECK(g > 0.0);
    CHECK(g < std::min(m.r_nu(), gamma0));
    double c = contraction_factor(m, theta, g);
    CHECK(c < 1.0);
    // limit at 0+ is lambda/(lambda+theta); the minimizer cannot do worse
    // than the low edge of its search bracket, which sits 1e-4*gamma0 off 0
    double c0lim = m.lambda() / (m.lambda() + theta);
    CHECK(contraction_factor(m, theta, 1e-8) == Approx(c0lim).epsilon(1e-5));
    CHECK(c <= c0lim + 1e-3);
}

TEST_CASE("solver: Brownian closed form") {
    SolveResult res = solve_fixed_point(mdl::brownian(0.0), 2.0, 0.0, 0.0, {5.0, 501});
    double sup = 0.0;
    for (int i = 0; i < res.F.size(); ++i)
        sup = std::max(sup, std::abs(res.F[i] - std::exp(-2.0 * res.F.x(i))));
    CHECK(sup < 1e-12);
    CHECK(res.F[0] == 1.0);
    CHECK(res.report.c_theta_gamma == 0.0);
}

TEST_CASE("solver: spectrally negative closed form") {
    LevyModel m = mdl::neg_exp_model();
    double theta = 0.5;
    double g0 = find_roots(m, theta).gamma0;
    SolveResult res = solve_fixed_point(m, theta, 0.3, 0.7, {8.0, 1601}, 1e-10);
    double sup = 0.0;
    for (int i = 0; i < res.F.size(); ++i)
        sup = std::max(sup, std::abs(res.F[i] - std::exp(-g0 * res.F.x(i))));
    CHECK(sup < 5e-4);
    CHECK(res.F[0] == 1.0);
}

TEST_CASE("solver: two-sided model sanity") {
    LevyModel m = mdl::two_sided_model();
    SolveResult res = solve_fixed_point(m, 1.0, 0.5, 0.3, {0.0, 1201}, 1e-9);
    const GridFunction& F = res.F;
    CHECK(F[0] == 1.0);
    for (int i = 0; i < F.size(); ++i) {
        CHECK(F[i] >= -1e-12);
        CHECK(F[i] <= 1.0 + 1e-12);
        if (i > 0) CHECK(F[i] <= F[i - 1] + 1e-9);
    }
    const SolveReport& rep = res.report;
    CHECK(rep.iterations >= 1);
    CHECK(rep.c_theta_gamma > 0.0);
    CHECK(rep.c_theta_gamma < 1.0);
    CHECK(rep.achieved_delta <= 1e-9 * (1.0 - rep.c_theta_gamma));
    CHECK(rep.tail_rate == Approx(find_roots(m, 1.0).gamma0));
    // successive increments contract at observed ratio <= c + slack
    for (std::size_t i = 1; i < rep.deltas.size(); ++i)
        if (rep.deltas[i - 1] > 1e-13)
            CHECK(rep.deltas[i] / rep.deltas[i - 1] <= rep.c_theta_gamma + 0.02);
}

TEST_CASE("solver: certain passage degenerates to the constant") {
    LevyModel up{-0.1, JumpMeasure({JumpComponent::make_exp_pos(1.0, 2.0)})};
    REQUIRE(up.mean_x1() > 0.0);
    SolveResult res = solve_fixed_point(up, 0.0, 0.0, 0.0, {});
    CHECK(res.report.exact_constant);
    CHECK(res.report.iterations == 0);
    for (int i = 0; i < res.F.size(); ++i) CHECK(res.F[i] == 1.0);
    CHECK(res.F.tail_rate() == 0.0);

    // continuous crossing: the overshoot weights never bite
    LevyModel down{-1.5, JumpMeasure({JumpComponent::make_exp_neg(1.0, 1.0)})};
    REQUIRE(down.mean_x1() > 0.0);
    SolveResult res2 = solve_fixed_point(down, 0.0, 0.4, 0.2, {});
    CHECK(res2.report.exact_constant);
    CHECK(res2.F[res2.F.size() - 1] == 1.0);

    // upward jumps with an overshoot weight: the transform is not constant
    // and the scheme has no contraction weight
    CHECK_THROWS_AS(solve_fixed_point(up, 0.0, 0.4, 0.2, {}), HypothesisError);
}

TEST_CASE("solver: rejects bad arguments") {
    CHECK_THROWS_AS(solve_fixed_point(mdl::two_sided_model(), -1.0, 0.0, 0.0, {}), ConfigError);
    CHECK_THROWS_AS(solve_fixed_point(mdl::two_sided_model(), 1.0, -0.5, 0.0, {}), ConfigError);
    CHECK_THROWS_AS(solve_fixed_point(mdl::brownian(0.0), 0.0, 0.0, 0.0, {}), HypothesisError);
}
