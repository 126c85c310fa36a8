#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "levypass/mc.hpp"
#include "models.hpp"

using namespace levypass;
using Catch::Approx;

TEST_CASE("jump crossings split the jump size exactly") {
    LevyModel m{0.0, JumpMeasure({JumpComponent::make_atom(2.0, 3.0)})};
    MCConfig cfg;
    cfg.horizon = 10.0;
    cfg.dt = 0.01;
    int seen = 0;
    for (long long i = 0; i < 2000; ++i) {
        std::mt19937_64 rng = detail::path_engine(11, i);
        PassageSample s = simulate_passage(m, 1.0, cfg, rng);
        if (s.censored) continue;
        if (s.via_jump) {
            ++seen;
            CHECK(s.K + s.L == 2.0);  // bitwise: the only jump size is 2
            CHECK(s.K >= 0.0);
            CHECK(s.L > 0.0);
        } else {
            CHECK(s.K == 0.0);
            CHECK(s.L == 0.0);
        }
    }
    CHECK(seen > 100);
}

TEST_CASE("mixed measure: overshoot and undershoot stay consistent") {
    LevyModel m = mdl::kitchen_sink_model();
    MCConfig cfg;
    cfg.horizon = 8.0;
    cfg.dt = 0.01;
    int jumps = 0;
    for (long long i = 0; i < 1500; ++i) {
        std::mt19937_64 rng = detail::path_engine(23, i);
        PassageSample s = simulate_passage(m, 0.7, cfg, rng);
        if (s.censored) continue;
        CHECK(s.T > 0.0);
        CHECK(s.T <= cfg.horizon);
        if (s.via_jump) {
            ++jumps;
            CHECK(s.K >= 0.0);
            CHECK(s.L > 0.0);
        } else {
            CHECK(s.K == 0.0);
            CHECK(s.L == 0.0);
        }
    }
    CHECK(jumps > 50);
}

TEST_CASE("Brownian estimate sits in the CLT band") {
    MCConfig cfg;
    cfg.n_paths = 5000;
    cfg.dt = 2e-3;
    cfg.horizon = 8.0;
    cfg.seed = 7;
    MCEstimate est = estimate_F(mdl::brownian(0.0), 2.0, 0.0, 0.0, 1.0, cfg);
    CHECK(std::abs(est.value - std::exp(-2.0)) < 3.0 * est.std_err + 1e-3);
    CHECK(est.std_err > 0.0);
    CHECK(est.truncation_bound == Approx(std::exp(-2.0 * 8.0)));
    CHECK(!est.truncation_dominates);
}

TEST_CASE("bridge correction only accelerates detected crossings") {
    MCConfig on;
    on.n_paths = 3000;
    on.dt = 5e-3;
    on.horizon = 6.0;
    on.seed = 99;
    MCConfig off = on;
    off.bridge_correction = false;
    LevyModel m = mdl::brownian(0.2);
    MCEstimate a = estimate_F(m, 1.0, 0.0, 0.0, 0.8, on);
    MCEstimate b = estimate_F(m, 1.0, 0.0, 0.0, 0.8, off);
    // coupled draw-by-draw: every bridge hit strictly precedes the crossing
    // the uncorrected path would report
    CHECK(a.value >= b.value);
    CHECK(a.hit_fraction >= b.hit_fraction);
    CHECK(a.value > b.value);  // with this dt the correction is visible
}

TEST_CASE("estimates are bitwise reproducible across thread counts") {
    LevyModel m = mdl::kitchen_sink_model();
    MCConfig cfg;
    cfg.n_paths = 4000;
    cfg.dt = 0.01;
    cfg.horizon = 5.0;
    cfg.seed = 31;
    MCEstimate one = estimate_F(m, 0.8, 0.3, 0.2, 1.0, cfg);
    MCEstimate again = estimate_F(m, 0.8, 0.3, 0.2, 1.0, cfg);
    CHECK(one.value == again.value);
    CHECK(one.std_err == again.std_err);
    cfg.n_threads = 8;
    MCEstimate eight = estimate_F(m, 0.8, 0.3, 0.2, 1.0, cfg);
    CHECK(one.value == eight.value);
    CHECK(one.std_err == eight.std_err);
    CHECK(one.hit_fraction == eight.hit_fraction);
    cfg.n_threads = 1;
    cfg.seed = 32;
    CHECK(estimate_F(m, 0.8, 0.3, 0.2, 1.0, cfg).value != one.value);
}

TEST_CASE("upward drift hits almost surely and quickly") {
    LevyModel m = mdl::brownian(-1.0);
    MCConfig cfg;
    cfg.n_paths = 2000;
    cfg.dt = 5e-3;
    cfg.horizon = 10.0;
    cfg.seed = 3;
    MCEstimate est = estimate_F(m, 0.5, 0.0, 0.0, 0.5, cfg);
    CHECK(est.hit_fraction > 0.99);
    MCEstimate near = estimate_F(m, 0.5, 0.0, 0.0, 0.01, cfg);
    CHECK(near.value > 0.97);
    CHECK(near.value <= 1.0);
}

TEST_CASE("payoff monotonicity under coupled draws") {
    LevyModel m = mdl::kitchen_sink_model();
    MCConfig cfg;
    cfg.n_paths = 2000;
    cfg.dt = 0.01;
    cfg.horizon = 5.0;
    cfg.seed = 17;
    double base = estimate_F(m, 0.5, 0.3, 0.2, 1.0, cfg).value;
    // same seed, same paths: only the payoff exponent changes
    CHECK(estimate_F(m, 1.5, 0.3, 0.2, 1.0, cfg).value < base);
    CHECK(estimate_F(m, 0.5, 1.3, 0.2, 1.0, cfg).value < base);
    CHECK(estimate_F(m, 0.5, 0.3, 1.2, 1.0, cfg).value < base);
    // farther level: separate paths, CLT-level comparison
    MCEstimate near = estimate_F(m, 0.5, 0.3, 0.2, 0.5, cfg);
    MCEstimate far = estimate_F(m, 0.5, 0.3, 0.2, 2.0, cfg);
    CHECK(near.value - far.value > -3.0 * (near.std_err + far.std_err));
}

TEST_CASE("ruin probability with censoring control") {
    LevyModel m = mdl::claims_model();
    MCConfig cfg;
    cfg.n_paths = 2000;
    cfg.dt = 0.02;
    cfg.horizon = 30.0;
    cfg.seed = 5;
    MCEstimate est = estimate_F(m, 0.0, 0.0, 0.0, 2.0, cfg);
    double a = 2.0 - std::sqrt(2.0), b = 2.0 + std::sqrt(2.0);
    double want = (b / 4.0) * std::exp(-a * 2.0) + (a / 4.0) * std::exp(-b * 2.0);
    CHECK(std::abs(est.value - want) < 3.0 * est.std_err + est.truncation_bound + 2e-3);
    CHECK(est.truncation_bound < 1e-3);
    CHECK(!est.truncation_dominates);
}

TEST_CASE("certain passage at zero killing: censored mass is the exact gap") {
    LevyModel m = mdl::brownian(-0.5);
    MCConfig cfg;
    cfg.n_paths = 3000;
    cfg.dt = 0.01;
    cfg.horizon = 5.0;
    cfg.seed = 13;
    MCEstimate est = estimate_F(m, 0.0, 0.0, 0.0, 1.0, cfg);
    CHECK(est.value == Approx(est.hit_fraction).margin(1e-15));
    CHECK(est.value + est.truncation_bound == Approx(1.0).margin(1e-12));
}

TEST_CASE("Monte Carlo configuration validation") {
    MCConfig cfg;
    cfg.n_paths = 500;
    CHECK_THROWS_AS(estimate_F(mdl::brownian(0.0), 1.0, 0.0, 0.0, 1.0, cfg), ConfigError);
    cfg.n_paths = 2000;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(estimate_F(mdl::brownian(0.0), 1.0, 0.0, 0.0, 1.0, cfg), ConfigError);
    cfg.dt = 1.0;
    cfg.horizon = 5.0;
    CHECK_THROWS_AS(estimate_F(mdl::brownian(0.0), 1.0, 0.0, 0.0, 1.0, cfg), ConfigError);
    cfg.dt = 1e-2;
    CHECK_THROWS_AS(estimate_F(mdl::brownian(0.0), -1.0, 0.0, 0.0, 1.0, cfg), ConfigError);
    CHECK_THROWS_AS(estimate_F(mdl::brownian(0.0), 1.0, -0.1, 0.0, 1.0, cfg), ConfigError);
    std::mt19937_64 rng(1);
    MCConfig ok;
    ok.horizon = 1.0;
    CHECK_THROWS_AS(simulate_passage(mdl::brownian(0.0), 0.0, ok, rng), ConfigError);
}
