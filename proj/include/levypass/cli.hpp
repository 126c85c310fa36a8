#pragma once

// Command-line front end: parse a model/run configuration, dispatch to the
// solver, Laplace, inversion, and Monte Carlo routes, emit CSV/JSON
// artifacts. Exit codes: 0 success, 1 route disagreement in compare, 2
// configuration errors, 3 domain/hypothesis violations, 4 numerical failures.
// Failures print a machine-readable error object to stdout.
//
// Depends on the vendored CLI11 single header (vendor/ on the include path).

#include <complex>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "errors.hpp"
#include "integro_diff.hpp"
#include "invert.hpp"
#include "io.hpp"

namespace levypass {

namespace cli_detail {

inline void emit_error(const std::string& type, const std::string& message) {
    nlohmann::json j = {{"error", {{"type", type}, {"message", message}}}};
    std::cout << j.dump() << "\n";
}

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline int cmd_roots(const RunConfig& cfg) {
    std::cout << roots_to_json(find_roots(cfg.model, cfg.theta)).dump(2) << "\n";
    return 0;
}

inline SolveResult run_solver(const RunConfig& cfg, double tol) {
    return solve_fixed_point(cfg.model, cfg.theta, cfg.mu, cfg.rho, cfg.grid,
                             tol > 0.0 ? tol : 1e-9);
}

inline int cmd_solve(const RunConfig& cfg, double tol) {
    SolveResult res = run_solver(cfg, tol);
    auto csv = open_out(out_path(cfg, "solve.csv"));
    write_solve_csv(csv, res.F);
    auto rep = open_out(out_path(cfg, "solve_report.json"));
    rep << solve_report_to_json(res.report).dump(2) << "\n";
    std::cout << solve_report_to_json(res.report).dump(2) << "\n";
    return 0;
}

inline int cmd_laplace(const RunConfig& cfg, double tol, const std::vector<double>& qs) {
    SolveResult res = run_solver(cfg, tol);
    std::vector<ResidualReport> rows;
    rows.reserve(qs.size());
    for (double q : qs)
        rows.push_back(equa_laplace_check(cfg.model, cfg.theta, cfg.mu, cfg.rho, res.F,
                                          std::complex<double>(q)));
    auto csv = open_out(out_path(cfg, "laplace.csv"));
    write_laplace_csv(csv, rows);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.rel);
    std::cout << nlohmann::json{{"max_rel_residual", worst}}.dump() << "\n";
    return 0;
}

inline int cmd_invert(const RunConfig& cfg, const std::vector<double>& xs) {
    LaplaceTransform fhat = [&](std::complex<double> q) {
        return F_hat_explicit_pos(cfg.model, cfg.theta, cfg.mu, cfg.rho, q);
    };
    std::vector<double> vals, errs;
    for (double x : xs) {
        double err = 0.0;
        vals.push_back(invert_at(fhat, x, {}, &err));
        errs.push_back(err);
    }
    auto csv = open_out(out_path(cfg, "invert.csv"));
    write_invert_csv(csv, xs, vals, errs);
    return 0;
}

inline int cmd_mc(const RunConfig& cfg, const std::vector<double>& xs, bool dump_samples) {
    std::vector<MCEstimate> ests;
    for (double x : xs)
        ests.push_back(estimate_F(cfg.model, cfg.theta, cfg.mu, cfg.rho, x, cfg.mc));
    auto csv = open_out(out_path(cfg, "mc.csv"));
    write_mc_csv(csv, xs, ests);
    if (dump_samples) {
        MCConfig mc = cfg.mc;
        if (mc.horizon <= 0.0) mc.horizon = default_horizon(cfg.model, cfg.theta);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::vector<PassageSample> samples;
            samples.reserve(static_cast<std::size_t>(mc.n_paths));
            for (long long p = 0; p < mc.n_paths; ++p) {
                auto rng = detail::path_engine(mc.seed, p);
                samples.push_back(simulate_passage(cfg.model, xs[i], mc, rng));
            }
            auto sout = open_out(out_path(cfg, "samples_" + std::to_string(i) + ".csv"));
            write_samples_csv(sout, samples);
        }
    }
    return 0;
}

inline int cmd_compare(const RunConfig& cfg, double tol, const std::vector<double>& xs) {
    double band = tol > 0.0 ? tol : 1e-2;
    SolveResult res = run_solver(cfg, 0.0);
    bool explicit_route = !cfg.model.nu.has_negative_jumps();
    bool disagree = false;
    auto csv = open_out(out_path(cfg, "compare.csv"));
    csv << "x,solve,invert,mc,mc_std_err,diff_solve_invert,diff_solve_mc,diff_invert_mc\n";
    LaplaceTransform fhat = [&](std::complex<double> q) {
        return F_hat_explicit_pos(cfg.model, cfg.theta, cfg.mu, cfg.rho, q);
    };
    for (double x : xs) {
        double sv = res.F(x);
        double iv = std::numeric_limits<double>::quiet_NaN();
        if (explicit_route) iv = invert_at(fhat, x);
        MCEstimate mc = estimate_F(cfg.model, cfg.theta, cfg.mu, cfg.rho, x, cfg.mc);
        double dsi = std::abs(sv - iv);
        double dsm = std::abs(sv - mc.value);
        double dim = std::abs(iv - mc.value);
        double mc_band = band + 3.0 * mc.std_err;  // estimates carry their own noise
        if (explicit_route && dsi > band) disagree = true;
        if (dsm > mc_band) disagree = true;
        if (explicit_route && dim > mc_band) disagree = true;
        csv << fmt17(x) << ',' << fmt17(sv) << ',' << fmt17(iv) << ',' << fmt17(mc.value)
            << ',' << fmt17(mc.std_err) << ',' << fmt17(dsi) << ',' << fmt17(dsm) << ','
            << fmt17(dim) << '\n';
    }
    std::cout << nlohmann::json{{"disagreement", disagree}}.dump() << "\n";
    return disagree ? 1 : 0;
}

} // namespace cli_detail

inline int run_cli(int argc, char** argv) {
    CLI::App app{"first-passage functionals of jump diffusions: solver, transforms, simulation"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed = -1;
    double tol = -1.0;
    std::vector<double> xs, qs;
    bool dump_samples = false;

    auto* roots = app.add_subcommand("roots", "roots of phi = theta, JSON to stdout");
    auto* solve = app.add_subcommand("solve", "fixed-point solve, CSV grid + JSON report");
    auto* laplace = app.add_subcommand("laplace", "transform-identity residuals at --q");
    auto* invert = app.add_subcommand("invert", "invert the explicit transform at --x");
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates at --x");
    auto* compare = app.add_subcommand("compare", "all routes side by side at --x");

    for (auto* sub : {roots, solve, laplace, invert, mc, compare}) {
        sub->add_option("--config", config_path, "run configuration JSON")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "Monte Carlo seed (overrides config)");
        sub->add_option("--tol", tol, "solver tolerance / compare band");
        sub->add_option("--x", xs, "x values")->delimiter(',');
        sub->add_option("--q", qs, "Laplace abscissas")->delimiter(',');
    }
    mc->add_flag("--samples", dump_samples, "also write per-path samples CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        cli_detail::emit_error("ConfigError", e.what());
        return 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.mc.seed = static_cast<std::uint64_t>(seed);
        if (xs.empty()) xs = {0.5, 1.0, 2.0};
        if (qs.empty()) qs = {0.5, 1.0, 2.0};

        if (app.got_subcommand(roots)) return cli_detail::cmd_roots(cfg);
        if (app.got_subcommand(solve)) return cli_detail::cmd_solve(cfg, tol);
        if (app.got_subcommand(laplace)) return cli_detail::cmd_laplace(cfg, tol, qs);
        if (app.got_subcommand(invert)) return cli_detail::cmd_invert(cfg, xs);
        if (app.got_subcommand(mc)) return cli_detail::cmd_mc(cfg, xs, dump_samples);
        return cli_detail::cmd_compare(cfg, tol, xs);
    } catch (const ConfigError& e) {
        cli_detail::emit_error("ConfigError", e.what());
        return 2;
    } catch (const NoRootError& e) {
        cli_detail::emit_error("NoRootError", e.what());
        return 3;
    } catch (const HypothesisError& e) {
        cli_detail::emit_error("HypothesisError", e.what());
        return 3;
    } catch (const DomainError& e) {
        cli_detail::emit_error("DomainError", e.what());
        return 3;
    } catch (const NumericalError& e) {
        cli_detail::emit_error("NumericalError", e.what());
        return 4;
    } catch (const std::exception& e) {
        cli_detail::emit_error("InternalError", e.what());
        return 4;
    }
}

} // namespace levypass
