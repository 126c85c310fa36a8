#pragma once

// Run configuration (JSON) and the CSV emitters shared by the command-line
// front end and the tests. Field names are part of the external interface;
// numbers are serialized with 17 significant digits so files round-trip.
//
// Depends on the vendored single-header nlohmann json (vendor/ is on the
// include path).

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "grid_function.hpp"
#include "laplace.hpp"
#include "mc.hpp"
#include "model.hpp"
#include "roots.hpp"
#include "solver.hpp"

namespace levypass {

struct RunConfig {
    LevyModel model;
    double theta = 0.0, mu = 0.0, rho = 0.0;
    GridSpec grid;
    MCConfig mc;
    std::string out_dir = ".";
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- JSON ----

inline nlohmann::json jump_to_json(const JumpComponent& c) {
    nlohmann::json j;
    switch (c.kind) {
    case JumpKind::atom:
        j = {{"kind", "atom"}, {"y", c.y}, {"w", c.w}};
        break;
    case JumpKind::exp_pos:
    case JumpKind::exp_neg:
        j = {{"kind", c.kind == JumpKind::exp_pos ? "exp_pos" : "exp_neg"},
             {"intensity", c.intensity},
             {"rate", c.rate},
             {"cutoff", c.cutoff}};
        break;
    case JumpKind::uniform:
        j = {{"kind", "uniform"}, {"a", c.a}, {"b", c.b}, {"intensity", c.intensity}};
        break;
    case JumpKind::tabulated:
        j = {{"kind", "tabulated"}, {"points", c.points}, {"weights", c.weights}};
        break;
    }
    return j;
}

inline JumpComponent jump_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "atom")
        return JumpComponent::make_atom(j.at("y").get<double>(), j.at("w").get<double>());
    if (kind == "exp_pos" || kind == "exp_neg") {
        double cutoff = j.value("cutoff", 0.0);
        double intensity = j.at("intensity").get<double>();
        double rate = j.at("rate").get<double>();
        return kind == "exp_pos" ? JumpComponent::make_exp_pos(intensity, rate, cutoff)
                                 : JumpComponent::make_exp_neg(intensity, rate, cutoff);
    }
    if (kind == "uniform")
        return JumpComponent::make_uniform(j.at("a").get<double>(), j.at("b").get<double>(),
                                           j.at("intensity").get<double>());
    if (kind == "tabulated")
        return JumpComponent::make_tabulated(j.at("points").get<std::vector<double>>(),
                                             j.at("weights").get<std::vector<double>>());
    throw ConfigError("unknown jump kind: " + kind);
}

inline nlohmann::json model_to_json(const LevyModel& m) {
    nlohmann::json jumps = nlohmann::json::array();
    for (const auto& c : m.nu.components()) jumps.push_back(jump_to_json(c));
    return {{"c0", m.c0}, {"jumps", jumps}};
}

inline LevyModel model_from_json(const nlohmann::json& j) {
    std::vector<JumpComponent> comps;
    for (const auto& cj : j.value("jumps", nlohmann::json::array()))
        comps.push_back(jump_from_json(cj));
    return LevyModel{j.at("c0").get<double>(), JumpMeasure(std::move(comps))};
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
    return {{"model", model_to_json(cfg.model)},
            {"params", {{"theta", cfg.theta}, {"mu", cfg.mu}, {"rho", cfg.rho}}},
            {"grid",
             {{"x_max", cfg.grid.x_max},
              {"n_points", cfg.grid.n_points},
              {"gamma", cfg.grid.gamma}}},
            {"mc",
             {{"n_paths", cfg.mc.n_paths},
              {"dt", cfg.mc.dt},
              {"horizon", cfg.mc.horizon},
              {"seed", cfg.mc.seed},
              {"bridge_correction", cfg.mc.bridge_correction},
              {"n_threads", cfg.mc.n_threads}}},
            {"out", cfg.out_dir}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    try {
        RunConfig cfg;
        cfg.model = model_from_json(j.at("model"));
        if (j.contains("params")) {
            const auto& p = j.at("params");
            cfg.theta = p.value("theta", 0.0);
            cfg.mu = p.value("mu", 0.0);
            cfg.rho = p.value("rho", 0.0);
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.x_max = g.value("x_max", 0.0);
            cfg.grid.n_points = g.value("n_points", 2001);
            cfg.grid.gamma = g.value("gamma", 0.0);
        }
        if (j.contains("mc")) {
            const auto& s = j.at("mc");
            cfg.mc.n_paths = s.value("n_paths", cfg.mc.n_paths);
            cfg.mc.dt = s.value("dt", cfg.mc.dt);
            cfg.mc.horizon = s.value("horizon", cfg.mc.horizon);
            cfg.mc.seed = s.value("seed", cfg.mc.seed);
            cfg.mc.bridge_correction = s.value("bridge_correction", cfg.mc.bridge_correction);
            cfg.mc.n_threads = s.value("n_threads", cfg.mc.n_threads);
        }
        cfg.out_dir = j.value("out", std::string("."));
        if (cfg.theta < 0.0 || cfg.mu < 0.0 || cfg.rho < 0.0)
            throw ConfigError("params: theta, mu, rho must be nonnegative");
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::json roots_to_json(const RootReport& r) {
    return {{"theta", r.theta},
            {"gamma0", r.gamma0},
            {"gamma0_star", r.gamma0_star},
            {"bracket_neg", {r.bracket_neg[0], r.bracket_neg[1]}},
            {"bracket_pos", {r.bracket_pos[0], r.bracket_pos[1]}},
            {"residual_neg", r.residual_neg},
            {"residual_pos", r.residual_pos}};
}

inline nlohmann::json solve_report_to_json(const SolveReport& r) {
    return {{"iterations", r.iterations},
            {"gamma", r.gamma},
            {"c_theta_gamma", r.c_theta_gamma},
            {"a_priori_bound", r.a_priori_bound},
            {"achieved_delta", r.achieved_delta},
            {"tail_rate", r.tail_rate},
            {"exact_constant", r.exact_constant},
            {"deltas", r.deltas}};
}

// ---- CSV ----

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

inline void write_solve_csv(std::ostream& out, const GridFunction& F) {
    out << "x,value\n";
    for (int i = 0; i < F.size(); ++i)
        out << fmt17(F.x(i)) << ',' << fmt17(F[i]) << '\n';
}

inline void write_laplace_csv(std::ostream& out, const std::vector<ResidualReport>& rows) {
    out << "re_q,im_q,re_res,im_res,rel_res\n";
    for (const auto& r : rows)
        out << fmt17(r.q.real()) << ',' << fmt17(r.q.imag()) << ',' << fmt17(r.residual.real())
            << ',' << fmt17(r.residual.imag()) << ',' << fmt17(r.rel) << '\n';
}

inline void write_invert_csv(std::ostream& out, const std::vector<double>& xs,
                             const std::vector<double>& vals, const std::vector<double>& errs) {
    out << "x,value,method_error_estimate\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << fmt17(xs[i]) << ',' << fmt17(vals[i]) << ',' << fmt17(errs[i]) << '\n';
}

inline void write_mc_csv(std::ostream& out, const std::vector<double>& xs,
                         const std::vector<MCEstimate>& ests) {
    out << "x,value,std_err,n_paths,hit_fraction,truncation_bound\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << fmt17(xs[i]) << ',' << fmt17(ests[i].value) << ',' << fmt17(ests[i].std_err)
            << ',' << ests[i].n_paths << ',' << fmt17(ests[i].hit_fraction) << ','
            << fmt17(ests[i].truncation_bound) << '\n';
}

inline void write_samples_csv(std::ostream& out, const std::vector<PassageSample>& samples) {
    out << "path_id,T,K,L,via_jump,censored\n";
    for (std::size_t i = 0; i < samples.size(); ++i)
        out << i << ',' << fmt17(samples[i].T) << ',' << fmt17(samples[i].K) << ','
            << fmt17(samples[i].L) << ',' << (samples[i].via_jump ? 1 : 0) << ','
            << (samples[i].censored ? 1 : 0) << '\n';
}

} // namespace levypass
