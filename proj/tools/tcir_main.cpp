// Experiment runner: each subcommand maps one distributional claim about
// time-changed processes to a seeded, reproducible simulation with CSV/JSON
// outputs.  Exit code 0 iff every declared check in the run passes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcir/experiments.hpp"
#include "tcir/version.hpp"

using nlohmann::json;
using namespace tcir;
using namespace tcir::experiments;

namespace {

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    json j;
    in >> j;
    return j;
}

// Flags shared by every subcommand; applied on top of the config file so that
// explicitly given flags win.
struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    double level = 0.0;
    int threads = 0;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* level_opt = nullptr;
    CLI::Option* threads_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON config file (flags override it)");
        seed_opt = app->add_option("--seed", seed, "master seed");
        out_opt = app->add_option("--out", out, "output directory");
        level_opt = app->add_option("--level", level, "significance level");
        threads_opt = app->add_option("--threads", threads, "worker threads");
    }

    void apply(json& j) const {
        if (seed_opt->count()) j["seed"] = seed;
        if (out_opt->count()) j["out"] = out;
        if (level_opt->count()) j["level"] = level;
        if (threads_opt->count()) j["threads"] = threads;
    }
};

int report(const RunSummary& s) {
    for (const auto& c : s.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  (value "
                  << c.value << ", threshold " << c.threshold << ")\n";
    }
    for (const auto& f : s.files) std::cout << "wrote " << f << "\n";
    std::cout << (s.all_pass ? "OK" : "FAILED") << "\n";
    return s.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - simulation experiments for subordinated processes"};
    app.require_subcommand(1);

    int exit_code = 0;
    auto run = [&exit_code](auto&& fn) {
        try {
            exit_code = report(fn());
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            exit_code = 2;
        }
    };

    // --- e0-check -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "e0-check", "Bessel clock at an independent stable(1/2) time vs the "
                        "subordinator at asinh(ell) (two-sample KS)");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto ell = std::make_shared<double>(0.0);
        auto samples = std::make_shared<int>(0);
        auto dt = std::make_shared<double>(0.0);
        auto norm = std::make_shared<std::string>();
        auto o_ell = cmd->add_option("--ell", *ell, "time-change argument");
        auto o_n = cmd->add_option("--samples", *samples, "samples per side");
        auto o_dt = cmd->add_option("--dt", *dt, "Bessel grid resolution");
        auto o_nm = cmd->add_option("--normalization", *norm, "paper-tail|first-passage");
        cmd->callback([=, &exit_code, &run] {
            (void)exit_code;
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_ell->count()) j["ell"] = *ell;
                if (o_n->count()) j["samples"] = *samples;
                if (o_dt->count()) j["dt"] = *dt;
                if (o_nm->count()) j["normalization"] = *norm;
                return run_e0_check(E0Config::from_json(j));
            });
        });
    }

    // --- retrieve-demo -------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "retrieve-demo", "recover X_0 from jump-threshold counts of the "
                             "subordinated integral process");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto alpha = std::make_shared<double>(0.0);
        auto m = std::make_shared<double>(0.0);
        auto schedule = std::make_shared<std::vector<double>>();
        auto reps = std::make_shared<int>(0);
        auto process = std::make_shared<std::string>();
        auto norm = std::make_shared<std::string>();
        auto o_a = cmd->add_option("--alpha", *alpha, "stability index");
        auto o_m = cmd->add_option("--m", *m, "threshold exponent (> 2/alpha)");
        auto o_s = cmd->add_option("--schedule", *schedule, "resolutions n (increasing)")
                       ->delimiter(',');
        auto o_r = cmd->add_option("--replicates", *reps, "independent paths per n");
        auto o_p = cmd->add_option("--process", *process,
                                   "constant:<x0> | affine:<x0>:<slope> | "
                                   "brownian:<x0> | hoelder:<x0>:<eta> | bessel-r2");
        auto o_nm = cmd->add_option("--normalization", *norm, "paper-tail|first-passage");
        cmd->callback([=, &run] {
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_a->count()) j["alpha"] = *alpha;
                if (o_m->count()) j["m"] = *m;
                if (o_s->count()) j["schedule"] = *schedule;
                if (o_r->count()) j["replicates"] = *reps;
                if (o_p->count()) j["process"] = *process;
                if (o_nm->count()) j["normalization"] = *norm;
                return run_retrieve_demo(RetrieveConfig::from_json(j));
            });
        });
    }

    // --- gamma-null ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "gamma-null", "retrieval collapse under a gamma time change, the "
                          "density gap, and the scaling contrast");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto m = std::make_shared<double>(0.0);
        auto reps = std::make_shared<int>(0);
        auto x0s = std::make_shared<std::vector<double>>();
        auto o_m = cmd->add_option("--m", *m, "threshold exponent");
        auto o_r = cmd->add_option("--replicates", *reps, "paths per (x0, n)");
        auto o_x = cmd->add_option("--x0s", *x0s, "integrand levels")->delimiter(',');
        cmd->callback([=, &run] {
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_m->count()) j["m"] = *m;
                if (o_r->count()) j["replicates"] = *reps;
                if (o_x->count()) j["x0s"] = *x0s;
                return run_gamma_null(GammaNullConfig::from_json(j));
            });
        });
    }

    // --- prop2-demo ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "prop2-demo", "subordinate Brownian motion: jump tails, |X_0| "
                          "estimator, residual-count decay");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto alpha = std::make_shared<double>(0.0);
        auto m = std::make_shared<double>(0.0);
        auto process = std::make_shared<std::string>();
        auto reps = std::make_shared<int>(0);
        auto schedule = std::make_shared<std::vector<double>>();
        auto o_a = cmd->add_option("--alpha", *alpha, "stability index");
        auto o_m = cmd->add_option("--m", *m, "threshold exponent");
        auto o_p = cmd->add_option("--process", *process, "constant:<x0> | hoelder:<x0>:<eta>");
        auto o_r = cmd->add_option("--replicates", *reps, "paths per n");
        auto o_s = cmd->add_option("--schedule", *schedule, "resolutions n")->delimiter(',');
        cmd->callback([=, &run] {
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_a->count()) j["alpha"] = *alpha;
                if (o_m->count()) j["m"] = *m;
                if (o_p->count()) j["process"] = *process;
                if (o_r->count()) j["replicates"] = *reps;
                if (o_s->count()) j["schedule"] = *schedule;
                return run_prop2_demo(Prop2Config::from_json(j));
            });
        });
    }

    // --- markov-probe ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "markov-probe", "does the next clock value depend on the Bessel level "
                            "given the current clock value?");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto clock = std::make_shared<std::string>();
        auto ell = std::make_shared<double>(0.0);
        auto ellp = std::make_shared<double>(0.0);
        auto reps = std::make_shared<int>(0);
        auto dt = std::make_shared<double>(0.0);
        auto o_c = cmd->add_option("--clock", *clock, "bessel|identity");
        auto o_l = cmd->add_option("--ell", *ell, "base time");
        auto o_lp = cmd->add_option("--ell-prime", *ellp, "look-ahead increment");
        auto o_r = cmd->add_option("--replicates", *reps, "sample pairs");
        auto o_dt = cmd->add_option("--dt", *dt, "Bessel grid resolution");
        cmd->callback([=, &run] {
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_c->count()) j["clock"] = *clock;
                if (o_l->count()) j["ell"] = *ell;
                if (o_lp->count()) j["ell_prime"] = *ellp;
                if (o_r->count()) j["replicates"] = *reps;
                if (o_dt->count()) j["dt"] = *dt;
                return run_markov_probe(MarkovProbeConfig::from_json(j));
            });
        });
    }

    // --- poisson-gof -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "poisson-gof", "chi-square GOF of the threshold jump count against "
                           "its Poisson law over an (eps, b) grid");
        auto flags = std::make_shared<CommonFlags>();
        flags->attach(cmd);
        auto alpha = std::make_shared<double>(0.0);
        auto m = std::make_shared<double>(0.0);
        auto paths = std::make_shared<int>(0);
        auto o_a = cmd->add_option("--alpha", *alpha, "stability index");
        auto o_m = cmd->add_option("--m", *m, "threshold exponent");
        auto o_p = cmd->add_option("--paths", *paths, "paths per cell");
        cmd->callback([=, &run] {
            run([&] {
                json j = load_config_file(flags->config_path);
                flags->apply(j);
                if (o_a->count()) j["alpha"] = *alpha;
                if (o_m->count()) j["m"] = *m;
                if (o_p->count()) j["paths"] = *paths;
                return run_poisson_gof(PoissonGofConfig::from_json(j));
            });
        });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
