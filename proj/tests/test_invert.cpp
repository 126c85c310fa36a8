#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "levypass/invert.hpp"
#include "levypass/laplace.hpp"
#include "levypass/solver.hpp"
#include "models.hpp"

using namespace levypass;
using Catch::Approx;
using cplx = std::complex<double>;

TEST_CASE("inversion recovers simple exponentials") {
    double err = 0.0;
    double v = invert_at([](cplx q) { return 1.0 / (q + 2.0); }, 1.0, {}, &err);
    CHECK(v == Approx(std::exp(-2.0)).margin(1e-8));
    CHECK(err < 1e-8);

    CHECK(invert_at([](cplx q) { return 1.0 / q; }, 3.0) == Approx(1.0).margin(1e-8));

    double g = 1.7;
    for (double x : {0.5, 1.0, 2.0})
        CHECK(invert_at([&](cplx q) { return 1.0 / (q + g); }, x) ==
              Approx(std::exp(-g * x)).margin(1e-7));
}

TEST_CASE("inversion of the ruin transform matches partial fractions") {
    LevyModel m = mdl::claims_model();
    auto fhat = [&](cplx q) { return F_hat_explicit_pos(m, 0.0, 0.0, 0.0, q); };
    double a = 2.0 - std::sqrt(2.0), b = 2.0 + std::sqrt(2.0);
    for (double x : {0.5, 1.0, 2.0}) {
        double want = (b / 4.0) * std::exp(-a * x) + (a / 4.0) * std::exp(-b * x);
        CHECK(invert_at(fhat, x) == Approx(want).margin(1e-6));
    }
    // sanity: probability-like and decreasing
    double p1 = invert_at(fhat, 0.5), p2 = invert_at(fhat, 1.0), p3 = invert_at(fhat, 2.0);
    CHECK(p1 <= 1.0 + 1e-9);
    CHECK(p3 >= -1e-9);
    CHECK(p1 > p2);
    CHECK(p2 > p3);
}

TEST_CASE("inversion agrees with the fixed-point route") {
    LevyModel m = mdl::claims_model();
    double theta = 0.5, mu = 0.2, rho = 0.1;
    SolveResult sol = solve_fixed_point(m, theta, mu, rho, {14.0, 4001});
    auto fhat = [&](cplx q) { return F_hat_explicit_pos(m, theta, mu, rho, q); };
    for (double x : {0.5, 1.0, 2.0})
        CHECK(invert_at(fhat, x) == Approx(sol.F(x)).margin(1e-3));
}

TEST_CASE("inversion reports an unsettled sum") {
    // transform of a step at t = 1, inverted exactly on the discontinuity
    auto step = [](cplx q) { return std::exp(-q) / q; };
    CHECK_THROWS_AS(invert_at(step, 1.0), NumericalError);
}

TEST_CASE("inversion argument checks") {
    auto ok = [](cplx q) { return 1.0 / q; };
    CHECK_THROWS_AS(invert_at(ok, 0.0), DomainError);
    CHECK_THROWS_AS(invert_at(ok, -1.0), DomainError);
    InversionSpec odd;
    odd.m_terms = 33;
    CHECK_THROWS_AS(invert_at(ok, 1.0, odd), ConfigError);
    InversionSpec tiny;
    tiny.m_terms = 8;
    CHECK_THROWS_AS(invert_at(ok, 1.0, tiny), ConfigError);
}
