#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcir/processes.hpp"
#include "tcir/subordinators.hpp"

namespace tcir::experiments {

std::string normalization_name(StableNorm n);
StableNorm parse_normalization(const std::string& name);

// Shared run settings; every command embeds these.
struct CommonConfig {
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    double level = 0.01;
    int threads = 1;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct RunSummary {
    nlohmann::json json;
    std::vector<CheckResult> checks;
    std::vector<std::string> files;
    bool all_pass = true;
};

// ---------------------------------------------------------------------------
// e0-check: law of the Bessel clock at an independent stable(1/2) time versus
// the subordinator at asinh(ell), under the first-passage normalization.
// ---------------------------------------------------------------------------
struct E0Config {
    CommonConfig common;
    double ell = 1.0;
    int samples = 10000;
    double dt = 1e-4;
    double horizon_quantile = 0.999;
    // Dip-refinement tolerance for the clock (see simulate_bessel2_with_clock);
    // 0 disables refinement and visibly truncates the clock's upper tail.
    double refine_tol = 0.02;
    StableNorm normalization = StableNorm::first_passage;

    nlohmann::json to_json() const;
    static E0Config from_json(const nlohmann::json& j);
};
RunSummary run_e0_check(const E0Config& cfg);

// ---------------------------------------------------------------------------
// retrieve-demo: recover X_0 from threshold counts of the jumps of the
// subordinated integral process, over a dyadic resolution schedule.
// ---------------------------------------------------------------------------
struct RetrieveConfig {
    CommonConfig common;
    double alpha = 0.5;
    double m = 5.0;
    std::vector<double> n_schedule = {16, 32, 64, 128, 256, 512,
                                      1024, 2048, 4096, 8192, 16384};
    int replicates = 200;
    ProcessSpec process = ProcessSpec{ProcessSpec::Kind::constant, 2.0, 0.0, 1.0};
    StableNorm normalization = StableNorm::paper_tail;
    double dt = 1e-3;             // Bessel driver resolution (bessel-r2 only)
    double cutoff_cap = 1e-6;     // cutoff never exceeds this
    double horizon_quantile = 0.999;
    double tolerance = 0.15;      // final median estimate vs target
    int monotone_points = 5;      // trailing points for the error-decrease check

    nlohmann::json to_json() const;
    static RetrieveConfig from_json(const nlohmann::json& j);
};
RunSummary run_retrieve_demo(const RetrieveConfig& cfg);

// ---------------------------------------------------------------------------
// gamma-null: the same counting pipeline degenerates under a gamma time change;
// scaling is invisible in the small-time limit (density gap, contrast probe).
// ---------------------------------------------------------------------------
struct GammaNullConfig {
    CommonConfig common;
    double alpha = 0.5;  // exponent used by the (failing) estimator
    double m = 5.0;
    std::vector<double> x0s = {1.0, 2.0};
    std::vector<double> n_schedule = {100, 1000, 10000};
    int replicates = 4000;

    double scheffe_x = 2.0;
    std::vector<double> scheffe_schedule = {1.0, 0.1, 0.01, 0.001};
    long long scheffe_replicates = 200000;
    double scheffe_final_bound = 0.05;

    double contrast_x1 = 1.0;
    double contrast_x2 = 4.0;
    double contrast_eps = 0.07;
    long long contrast_replicates = 2000;

    nlohmann::json to_json() const;
    static GammaNullConfig from_json(const nlohmann::json& j);
};
RunSummary run_gamma_null(const GammaNullConfig& cfg);

// ---------------------------------------------------------------------------
// prop2-demo: subordinate Brownian motion statistics — jump tails, the |X_0|
// estimator from squared increment counts, and the residual-count decay.
// ---------------------------------------------------------------------------
struct Prop2Config {
    CommonConfig common;
    double alpha = 0.5;
    double m = 5.0;
    ProcessSpec process = ProcessSpec{ProcessSpec::Kind::constant, -3.0, 0.0, 1.0};

    double tail_eps = 0.5;
    std::vector<double> tail_xs = {0.5, 1.0, 2.0};
    int tail_replicates = 20000;

    std::vector<double> n_schedule = {16, 32, 64, 128, 256, 512, 1024};
    int replicates = 100;
    double em_step = 1e-3;
    double tolerance = 0.2;

    double k_a = 1.0;
    double k_x0 = -3.0;
    double k_eta = 1.0;
    std::vector<double> k_n_schedule = {4, 8, 16, 32, 64};
    int k_replicates = 1000;

    nlohmann::json to_json() const;
    static Prop2Config from_json(const nlohmann::json& j);
};
RunSummary run_prop2_demo(const Prop2Config& cfg);

// ---------------------------------------------------------------------------
// markov-probe: does the next clock value depend on the current Bessel level
// once the current clock value is known?
// ---------------------------------------------------------------------------
struct MarkovProbeConfig {
    CommonConfig common;
    std::string clock = "bessel";  // "bessel" or "identity" (control)
    double ell = 0.5;
    double ell_prime = 0.5;
    int replicates = 20000;
    double dt = 1e-3;
    int bins = 10;
    double horizon_quantile = 0.999;
    double refine_tol = 0.0;  // rank statistics don't need the refined tail
    StableNorm normalization = StableNorm::first_passage;

    nlohmann::json to_json() const;
    static MarkovProbeConfig from_json(const nlohmann::json& j);
};
RunSummary run_markov_probe(const MarkovProbeConfig& cfg);

// ---------------------------------------------------------------------------
// poisson-gof: chi-square goodness of fit of the threshold count against its
// Poisson law over a grid of (eps, b).
// ---------------------------------------------------------------------------
struct PoissonGofConfig {
    CommonConfig common;
    double alpha = 0.5;
    double m = 5.0;
    std::vector<double> eps_list = {0.05, 0.1, 0.2};
    std::vector<double> b_list = {0.5, 1.0, 2.0};
    int paths = 5000;

    nlohmann::json to_json() const;
    static PoissonGofConfig from_json(const nlohmann::json& j);
};
RunSummary run_poisson_gof(const PoissonGofConfig& cfg);

}  // namespace tcir::experiments
