#pragma once

// Monte Carlo route: simulate X_t = B_t - c0 t + J_t jump to jump, with
// Gaussian substeps and a Brownian-bridge crossing check inside each substep,
// and average the passage functional. Serves as the probabilistic referee for
// the analytic routes. Per-path generators are split deterministically from
// the seed, and the reduction order is fixed by path index, so estimates are
// bitwise reproducible for any thread count.

#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "roots.hpp"

namespace levypass {

struct MCConfig {
    long long n_paths = 100000;
    double dt = 1e-3;
    double horizon = 0.0;  // <= 0: pick from theta (or the drift when theta = 0)
    std::uint64_t seed = 1;
    bool bridge_correction = true;
    int n_threads = 1;
};

struct PassageSample {
    double T = 0.0;  // horizon when censored
    double K = 0.0;
    double L = 0.0;
    bool via_jump = false;
    bool censored = false;
};

struct MCEstimate {
    double value = 0.0;
    double std_err = 0.0;
    long long n_paths = 0;
    double hit_fraction = 0.0;
    double truncation_bound = 0.0;  // bound/estimate on the censored-mass contribution
    bool truncation_dominates = false;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 path_engine(std::uint64_t seed, long long path_id) {
    return std::mt19937_64(mix64(seed ^ mix64(static_cast<std::uint64_t>(path_id) + 1)));
}

} // namespace detail

/// One path to first passage over x or to the horizon. Jump times are exact
/// (exponential clock at rate lambda); between jumps the diffusion advances
/// in substeps of at most dt, each substep checking an endpoint crossing and,
/// with bridge_correction, an interior bridge crossing with probability
/// exp(-2(x - X_a)(x - X_b)/h). The bridge uniform is consumed either way so
/// correction on/off runs are coupled draw by draw. Jump crossings record the
/// overshoot/undershoot split of the jump, nudged by at most 2 ulp so that
/// K + L reproduces the jump size bitwise.
inline PassageSample simulate_passage(const LevyModel& m, double x, const MCConfig& cfg,
                                      std::mt19937_64& rng) {
    if (!(x > 0.0)) throw ConfigError("simulate_passage: level must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double lam = m.lambda();

    PassageSample out;
    double t = 0.0, X = 0.0;
    while (t < cfg.horizon) {
        double seg_end = cfg.horizon;
        bool jump_next = false;
        if (lam > 0.0) {
            double tau = expo(rng) / lam;
            if (t + tau < cfg.horizon) {
                seg_end = t + tau;
                jump_next = true;
            }
        }
        double seg = seg_end - t;
        long long n_sub = std::max(1LL, static_cast<long long>(std::ceil(seg / cfg.dt)));
        for (long long k = 0; k < n_sub; ++k) {
            double t0 = t + seg * static_cast<double>(k) / static_cast<double>(n_sub);
            double t1 = k + 1 == n_sub
                            ? seg_end
                            : t + seg * static_cast<double>(k + 1) / static_cast<double>(n_sub);
            double h = t1 - t0;
            double Xb = X + std::sqrt(h) * gauss(rng) - m.c0 * h;
            double u = unif(rng);  // bridge draw, consumed in every mode
            if (Xb >= x) {
                out.T = t0 + h * (x - X) / (Xb - X);
                return out;
            }
            double logp = -2.0 * (x - X) * (x - Xb) / h;
            if (cfg.bridge_correction && logp > -40.0 && u < std::exp(logp)) {
                out.T = t0 + 0.5 * h;
                return out;
            }
            X = Xb;
        }
        t = seg_end;
        if (jump_next) {
            double y = m.nu.sample(rng);
            double Xpost = X + y;
            if (Xpost >= x) {
                out.T = t;
                out.via_jump = true;
                out.L = x - X;
                out.K = y - out.L;
                for (int i = 0; i < 2 && out.K + out.L < y; ++i)
                    out.K = std::nextafter(out.K, num::inf);
                for (int i = 0; i < 2 && out.K + out.L > y; ++i)
                    out.K = std::nextafter(out.K, -num::inf);
                if (out.K < 0.0) {  // jump barely clears the level
                    out.K = 0.0;
                    out.L = y;
                }
                return out;
            }
            X = Xpost;
        }
    }
    out.censored = true;
    out.T = cfg.horizon;
    return out;
}

/// Horizon used when MCConfig.horizon is not set: deep enough that the
/// censored mass is negligible against the damping (or the drift, at
/// theta = 0 with downward drift).
inline double default_horizon(const LevyModel& m, double theta) {
    if (theta > 0.0) return 30.0 / theta;
    double mean = m.mean_x1();
    if (mean < 0.0) return 50.0 / -mean;
    return 50.0;
}

inline MCEstimate estimate_F(const LevyModel& m, double theta, double mu, double rho,
                             double x, MCConfig cfg) {
    if (theta < 0.0 || mu < 0.0 || rho < 0.0)
        throw ConfigError("estimate_F: parameters must be nonnegative");
    if (cfg.horizon <= 0.0) cfg.horizon = default_horizon(m, theta);
    if (!(cfg.dt > 0.0)) throw ConfigError("estimate_F: dt must be positive");
    if (!(cfg.horizon >= 100.0 * cfg.dt))
        throw ConfigError("estimate_F: horizon must cover at least 100 steps");
    if (cfg.n_paths < 1000) throw ConfigError("estimate_F: need at least 1000 paths");

    long long n = cfg.n_paths;
    std::vector<double> vals(static_cast<std::size_t>(n));
    std::vector<unsigned char> hits(static_cast<std::size_t>(n));
    auto run_range = [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) {
            std::mt19937_64 rng = detail::path_engine(cfg.seed, i);
            PassageSample s = simulate_passage(m, x, cfg, rng);
            std::size_t j = static_cast<std::size_t>(i);
            hits[j] = s.censored ? 0 : 1;
            vals[j] = s.censored ? 0.0 : std::exp(-theta * s.T - mu * s.K - rho * s.L);
        }
    };
    int workers = std::max(1, cfg.n_threads);
    if (workers == 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        long long chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            long long lo = w * chunk, hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    MCEstimate est;
    est.n_paths = n;
    est.value = num::pairwise_sum(vals) / static_cast<double>(n);
    long long nhit = 0;
    for (unsigned char c : hits) nhit += c;
    est.hit_fraction = static_cast<double>(nhit) / static_cast<double>(n);
    for (double& v : vals) v *= v;
    double meansq = num::pairwise_sum(vals) / static_cast<double>(n);
    double var = (meansq - est.value * est.value) * static_cast<double>(n) /
                 static_cast<double>(n - 1);
    est.std_err = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));

    if (theta > 0.0) {
        est.truncation_bound = std::exp(-theta * cfg.horizon);
    } else if (m.mean_x1() < 0.0) {
        // tail-slope estimate: paths alive at the horizon sit near
        // E(X_1) * horizon and still need to climb to x
        double g0 = find_roots(m, 0.0).gamma0;
        est.truncation_bound =
            std::min(1.0, std::exp(-g0 * (x - m.mean_x1() * cfg.horizon)));
    } else {
        est.truncation_bound = 1.0 - est.hit_fraction;  // every hit is eventual, theta = 0
    }
    est.truncation_dominates = est.truncation_bound > est.std_err;
    return est;
}

} // namespace levypass
