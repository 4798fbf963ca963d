#include "tcir/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "tcir/quasiinvariance.hpp"
#include "tcir/retrieval.hpp"
#include "tcir/rng.hpp"
#include "tcir/stats.hpp"
#include "tcir/timechange.hpp"
#include "tcir/version.hpp"

namespace tcir::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

std::string normalization_name(StableNorm n) {
    return n == StableNorm::paper_tail ? "paper-tail" : "first-passage";
}

StableNorm parse_normalization(const std::string& name) {
    if (name == "paper-tail") return StableNorm::paper_tail;
    if (name == "first-passage") return StableNorm::first_passage;
    throw std::invalid_argument("unknown normalization: " + name);
}

// ===========================================================================
// Shared machinery
// ===========================================================================
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (j.contains(key)) return j.at(key).get<T>();
    return fallback;
}

// The thread count is an execution detail and is deliberately left out of the
// embedded config: outputs must be byte-identical across --threads.
json common_to_json(const CommonConfig& c) {
    return json{{"seed", c.seed}, {"out", c.out_dir}, {"level", c.level}};
}

CommonConfig common_from_json(const json& j) {
    CommonConfig c;
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.out_dir = get_or<std::string>(j, "out", c.out_dir);
    c.level = get_or<double>(j, "level", c.level);
    c.threads = get_or<int>(j, "threads", c.threads);
    return c;
}

// Runs fn(0..n-1); results land at their own index, so the outcome does not
// depend on the thread count.
template <typename T, typename Fn>
std::vector<T> replicate_map(int n, int threads, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(n));
    const int nt = std::clamp(threads, 1, 64);
    if (nt == 1 || n < 2) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int w = 0; w < nt; ++w) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= n) return;
                    out[static_cast<std::size_t>(i)] = fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

void write_csv(const std::string& path, const json& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows,
               std::vector<std::string>& files) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << kVersion << "\n";
    out << "# config: " << config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << fmt(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
    files.push_back(path);
}

CheckResult make_check(const std::string& name, bool pass, double value,
                       double threshold, const std::string& detail) {
    return CheckResult{name, pass, value, threshold, detail};
}

RunSummary finalize(const std::string& command, const json& config,
                    std::vector<CheckResult> checks, json extra,
                    std::vector<std::string> files, const std::string& out_dir) {
    RunSummary s;
    s.checks = std::move(checks);
    s.files = std::move(files);
    s.all_pass = true;
    json jchecks = json::array();
    for (const CheckResult& c : s.checks) {
        s.all_pass = s.all_pass && c.pass;
        jchecks.push_back(json{{"name", c.name},
                               {"pass", c.pass},
                               {"value", c.value},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    }
    s.json = json{{"command", command},
                  {"version", kVersion},
                  {"config", config},
                  {"checks", jchecks},
                  {"pass", s.all_pass}};
    if (!extra.is_null()) s.json["results"] = std::move(extra);

    const std::string path = out_dir + "/" + command + "_summary.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << s.json.dump(2) << "\n";
    s.files.push_back(path);
    return s;
}

void ensure_out_dir(const std::string& dir) { fs::create_directories(dir); }

std::unique_ptr<ProcessEvaluator> make_deterministic_evaluator(const ProcessSpec& spec) {
    switch (spec.kind) {
        case ProcessSpec::Kind::constant: return make_constant(spec.x0);
        case ProcessSpec::Kind::affine: return make_affine(spec.x0, spec.slope);
        case ProcessSpec::Kind::hoelder_test: return make_hoelder_test(spec.x0, spec.eta);
        default:
            throw std::invalid_argument("process kind needs a driver stream: " +
                                        spec.to_string());
    }
}

double median_of(std::vector<double> v) { return stats::quantile(std::move(v), 0.5); }

// 0.999-style quantile of tau_ell; closed form for alpha = 1/2, otherwise
// Monte Carlo from the exact marginal sampler.
double marginal_quantile_or_mc(const StableConfig& cfg, double ell, double p,
                               std::uint64_t seed) {
    if (cfg.alpha == 0.5) return stable_marginal_quantile(cfg, ell, p);
    auto rng = substream(seed, 0x9cafe);
    std::vector<double> draws(200000);
    for (double& d : draws) d = sample_stable_marginal(cfg, ell, rng);
    return stats::quantile(std::move(draws), p);
}

}  // namespace

// ===========================================================================
// e0-check
// ===========================================================================

json E0Config::to_json() const {
    json j = common_to_json(common);
    j["ell"] = ell;
    j["samples"] = samples;
    j["dt"] = dt;
    j["horizon_quantile"] = horizon_quantile;
    j["refine_tol"] = refine_tol;
    j["normalization"] = normalization_name(normalization);
    return j;
}

E0Config E0Config::from_json(const json& j) {
    E0Config c;
    c.common = common_from_json(j);
    c.ell = get_or<double>(j, "ell", c.ell);
    c.samples = get_or<int>(j, "samples", c.samples);
    c.dt = get_or<double>(j, "dt", c.dt);
    c.horizon_quantile = get_or<double>(j, "horizon_quantile", c.horizon_quantile);
    c.refine_tol = get_or<double>(j, "refine_tol", c.refine_tol);
    c.normalization = parse_normalization(
        get_or<std::string>(j, "normalization", "first-passage"));
    return c;
}

RunSummary run_e0_check(const E0Config& cfg) {
    if (cfg.normalization != StableNorm::first_passage)
        throw std::invalid_argument("e0-check requires the first-passage normalization");
    if (!(cfg.ell > 0.0)) throw std::invalid_argument("e0-check: ell must be positive");
    ensure_out_dir(cfg.common.out_dir);

    const StableConfig stable{0.5, StableNorm::first_passage};
    const double a_ell = std::asinh(cfg.ell);
    const double cap = stable_marginal_quantile(stable, cfg.ell, cfg.horizon_quantile);

    struct Row {
        double h = 0.0;
        double tau_a = 0.0;
        bool truncated = false;
    };
    auto rows = replicate_map<Row>(cfg.samples, cfg.common.threads, [&](int i) {
        Row r;
        auto rng = substream(cfg.common.seed, 1, static_cast<std::uint64_t>(i));
        const double tau = sample_stable_marginal(stable, cfg.ell, rng);
        r.truncated = tau > cap;
        const double t_used = std::min(tau, cap);
        const BesselWithClock sim = simulate_bessel2_with_clock(
            stretched_grid(t_used, cfg.dt), cfg.refine_tol, rng);
        r.h = sim.clock.values.back();

        auto rng2 = substream(cfg.common.seed, 2, static_cast<std::uint64_t>(i));
        r.tau_a = sample_stable_marginal(stable, a_ell, rng2);
        return r;
    });

    std::vector<double> h_samples, tau_samples;
    h_samples.reserve(rows.size());
    tau_samples.reserve(rows.size());
    long long truncated = 0;
    std::vector<std::vector<double>> csv_rows;
    csv_rows.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        h_samples.push_back(rows[i].h);
        tau_samples.push_back(rows[i].tau_a);
        truncated += rows[i].truncated ? 1 : 0;
        csv_rows.push_back({static_cast<double>(i), rows[i].h, rows[i].tau_a,
                            rows[i].truncated ? 1.0 : 0.0});
    }
    const double trunc_freq =
        static_cast<double>(truncated) / static_cast<double>(cfg.samples);

    const stats::TestReport ks =
        stats::ks_two_sample(h_samples, tau_samples, cfg.common.level);

    const double roundtrip = std::abs(std::sinh(a_ell) - cfg.ell);

    std::vector<CheckResult> checks;
    checks.push_back(make_check(
        "ks_clock_vs_subordinator", ks.pass, ks.statistic, ks.threshold,
        "sup ECDF gap " + fmt(ks.statistic) + " vs " + fmt(ks.threshold)));
    checks.push_back(make_check("bessel_truncation_frequency", trunc_freq < 0.01,
                                trunc_freq, 0.01,
                                "horizon capped at quantile " +
                                    fmt(cfg.horizon_quantile) + " (" + fmt(cap) + ")"));
    checks.push_back(make_check("asinh_roundtrip", roundtrip < 1e-12, roundtrip, 1e-12,
                                "sinh(a(ell)) vs ell"));

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/e0_samples.csv", jcfg,
              {"index", "clock_at_tau", "tau_at_a", "truncated"}, csv_rows, files);

    json extra{{"a_ell", a_ell},
               {"horizon_cap", cap},
               {"truncation_frequency", trunc_freq},
               {"ks_statistic", ks.statistic},
               {"ks_threshold", ks.threshold}};
    return finalize("e0_check", jcfg, std::move(checks), std::move(extra),
                    std::move(files), cfg.common.out_dir);
}

// ===========================================================================
// retrieve-demo
// ===========================================================================

json RetrieveConfig::to_json() const {
    json j = common_to_json(common);
    j["alpha"] = alpha;
    j["m"] = m;
    j["schedule"] = n_schedule;
    j["replicates"] = replicates;
    j["process"] = process.to_string();
    j["normalization"] = normalization_name(normalization);
    j["dt"] = dt;
    j["cutoff_cap"] = cutoff_cap;
    j["horizon_quantile"] = horizon_quantile;
    j["tolerance"] = tolerance;
    j["monotone_points"] = monotone_points;
    return j;
}

RetrieveConfig RetrieveConfig::from_json(const json& j) {
    RetrieveConfig c;
    c.common = common_from_json(j);
    c.alpha = get_or<double>(j, "alpha", c.alpha);
    c.m = get_or<double>(j, "m", c.m);
    c.n_schedule = get_or<std::vector<double>>(j, "schedule", c.n_schedule);
    c.replicates = get_or<int>(j, "replicates", c.replicates);
    if (j.contains("process")) c.process = ProcessSpec::parse(j.at("process"));
    c.normalization = parse_normalization(
        get_or<std::string>(j, "normalization", normalization_name(c.normalization)));
    c.dt = get_or<double>(j, "dt", c.dt);
    c.cutoff_cap = get_or<double>(j, "cutoff_cap", c.cutoff_cap);
    c.horizon_quantile = get_or<double>(j, "horizon_quantile", c.horizon_quantile);
    c.tolerance = get_or<double>(j, "tolerance", c.tolerance);
    c.monotone_points = get_or<int>(j, "monotone_points", c.monotone_points);
    return c;
}

namespace {

struct RetrieveRep {
    double j_pos = 0.0;
    double j_neg = 0.0;
    int resamples = 0;
    bool truncated = false;
};

// One replicate of the counting pipeline: sample the subordinator at a cutoff,
// stream the jump increments, and re-sample at a finer cutoff whenever the
// observed integrand extrema say a sub-cutoff jump could have cleared the
// threshold.
RetrieveRep retrieve_one(const RetrieveConfig& cfg, const StableConfig& stable,
                         double eps, double delta0, double bessel_cap,
                         std::uint64_t ni, int rep) {
    const double threshold = std::pow(eps, cfg.m);
    RetrieveRep out;
    double delta = delta0;
    const auto rep_u = static_cast<std::uint64_t>(rep);
    auto rng_path = substream(cfg.common.seed, 0x7e7, ni, rep_u);

    for (int attempt = 0; attempt < 12; ++attempt) {
        const JumpPath path = sample_stable_jumps(stable, eps, delta, rng_path);

        std::unique_ptr<ProcessEvaluator> x;
        switch (cfg.process.kind) {
            case ProcessSpec::Kind::brownian:
                x = make_brownian(cfg.process.x0,
                                  substream(cfg.common.seed, 0x9c0, ni, rep_u));
                break;
            case ProcessSpec::Kind::bessel_clock_integrand: {
                const double tau_eps = evaluate_subordinator(path, eps);
                out.truncated = tau_eps > bessel_cap;
                const double horizon = std::max(std::min(tau_eps, bessel_cap), eps);
                auto rng_proc = substream(cfg.common.seed, 0x9c0, ni, rep_u);
                x = make_bessel_clock_integrand(
                    simulate_bessel2_on_grid(stretched_grid(horizon, cfg.dt), rng_proc),
                    /*clamp_beyond_horizon=*/true);
                break;
            }
            default:
                x = make_deterministic_evaluator(cfg.process);
        }

        long long jp = 0, jn = 0;
        double b_obs = std::abs(x->initial_value());
        for_each_jump_delta_y(*x, path, eps, QuadratureOptions{}, [&](const JumpDelta& d) {
            if (d.delta_y > threshold) ++jp;
            if (-d.delta_y > threshold) ++jn;
            b_obs = std::max({b_obs, std::abs(d.x_min), std::abs(d.x_max)});
        });
        b_obs = std::max(b_obs, std::abs(x->value_at(evaluate_subordinator(path, eps))));

        if (path.cutoff <= threshold / std::max(b_obs, 1e-12)) {
            out.j_pos = static_cast<double>(jp);
            out.j_neg = static_cast<double>(jn);
            return out;
        }
        delta = 0.5 * threshold / b_obs;
        ++out.resamples;
    }
    throw truncation_error("retrieve-demo: cutoff guard not satisfiable");
}

}  // namespace

RunSummary run_retrieve_demo(const RetrieveConfig& cfg) {
    if (cfg.n_schedule.empty()) throw std::invalid_argument("empty schedule");
    if (!(cfg.m > 2.0 / cfg.alpha))
        throw std::invalid_argument("retrieve-demo requires m > 2/alpha");
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    for (std::size_t i = 1; i < cfg.n_schedule.size(); ++i)
        if (!(cfg.n_schedule[i] > cfg.n_schedule[i - 1]))
            throw std::invalid_argument("schedule must be increasing");
    ensure_out_dir(cfg.common.out_dir);

    const StableConfig stable{cfg.alpha, cfg.normalization};
    const double x0 = cfg.process.initial_value();

    std::vector<CountPoint> medians;
    std::vector<double> median_abs_error;  // cross-replicate median |estimate - |x0||
    std::vector<std::vector<double>> rep_rows;
    long long total_resamples = 0;
    long long total_truncated = 0;

    const double power = 1.0 / cfg.alpha;
    for (std::size_t ni = 0; ni < cfg.n_schedule.size(); ++ni) {
        const double n = cfg.n_schedule[ni];
        const double eps = 1.0 / n;
        const double threshold = std::pow(eps, cfg.m);
        const double b_guard = 2.0 * std::max(1.0, std::abs(x0));
        const double delta0 = std::min(threshold / b_guard, cfg.cutoff_cap);
        const double bessel_cap =
            cfg.process.kind == ProcessSpec::Kind::bessel_clock_integrand
                ? marginal_quantile_or_mc(stable, eps, cfg.horizon_quantile,
                                          cfg.common.seed)
                : 0.0;

        auto reps = replicate_map<RetrieveRep>(
            cfg.replicates, cfg.common.threads, [&](int r) {
                return retrieve_one(cfg, stable, eps, delta0, bessel_cap, ni, r);
            });

        std::vector<double> jp, jn, abs_err;
        jp.reserve(reps.size());
        jn.reserve(reps.size());
        abs_err.reserve(reps.size());
        const double scale = std::pow(n, 1.0 - cfg.alpha * cfg.m);
        for (std::size_t r = 0; r < reps.size(); ++r) {
            jp.push_back(reps[r].j_pos);
            jn.push_back(reps[r].j_neg);
            total_resamples += reps[r].resamples;
            total_truncated += reps[r].truncated ? 1 : 0;
            const double ep = reps[r].j_pos > 0 ? std::pow(scale * reps[r].j_pos, power) : 0.0;
            const double en = reps[r].j_neg > 0 ? std::pow(scale * reps[r].j_neg, power) : 0.0;
            abs_err.push_back(std::abs((x0 >= 0.0 ? ep : en) - std::abs(x0)));
            rep_rows.push_back({n, static_cast<double>(r), reps[r].j_pos, reps[r].j_neg,
                                ep, en, static_cast<double>(reps[r].resamples)});
        }
        medians.push_back({n, median_of(jp), median_of(jn)});
        median_abs_error.push_back(median_of(abs_err));
    }

    const EstimateSeries series =
        estimate_x0(medians, cfg.alpha, cfg.m, ExponentMode::lebesgue, x0);

    std::vector<std::vector<double>> series_rows;
    for (const EstimatePoint& p : series.points)
        series_rows.push_back({p.n, p.j_pos, p.j_neg, p.scaled_pos, p.scaled_neg,
                               p.estimate_pos, p.estimate_neg});

    // Checks against the known initial value.
    std::vector<CheckResult> checks;
    const auto& last = series.points.back();
    const double est_signed = x0 >= 0.0 ? last.estimate_pos : last.estimate_neg;
    const double est_opposite = x0 >= 0.0 ? last.estimate_neg : last.estimate_pos;
    if (std::abs(x0) > 1e-12) {
        const double rel = std::abs(est_signed - std::abs(x0)) / std::abs(x0);
        checks.push_back(make_check("final_median_estimate", rel <= cfg.tolerance, rel,
                                    cfg.tolerance,
                                    "estimate " + fmt(est_signed) + " vs |x0| " +
                                        fmt(std::abs(x0))));
        checks.push_back(make_check("opposite_branch_small", est_opposite <= 0.1,
                                    est_opposite, 0.1, "sign-separated branch"));
    } else {
        checks.push_back(make_check("final_median_estimate",
                                    std::max(last.estimate_pos, last.estimate_neg) <=
                                        cfg.tolerance,
                                    std::max(last.estimate_pos, last.estimate_neg),
                                    cfg.tolerance, "both branches near zero"));
    }
    if (static_cast<int>(series.points.size()) >= cfg.monotone_points &&
        std::abs(x0) > 1e-12) {
        // Median absolute error across replicates shrinks like n^{-(m alpha - 1)/2};
        // its log must fall strictly across the trailing schedule points.
        bool monotone = true;
        std::string trail;
        const std::size_t start = median_abs_error.size() -
                                  static_cast<std::size_t>(cfg.monotone_points);
        for (std::size_t k = start; k < median_abs_error.size(); ++k) {
            if (k > start && !(median_abs_error[k] < median_abs_error[k - 1]))
                monotone = false;
            trail += (k > start ? " " : "") + fmt(median_abs_error[k]);
        }
        checks.push_back(make_check("error_monotone_tail", monotone,
                                    monotone ? 0.0 : 1.0, 0.0,
                                    "trailing median abs errors: " + trail));
    }

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/retrieve_demo_series.csv", jcfg,
              {"n", "J_pos", "J_neg", "scaled_pos", "scaled_neg", "estimate_pos",
               "estimate_neg"},
              series_rows, files);
    write_csv(cfg.common.out_dir + "/retrieve_demo_replicates.csv", jcfg,
              {"n", "replicate", "J_pos", "J_neg", "estimate_pos", "estimate_neg",
               "resamples"},
              rep_rows, files);

    json extra{{"target_x0", x0},
               {"final_estimate_pos", last.estimate_pos},
               {"final_estimate_neg", last.estimate_neg},
               {"median_abs_error", median_abs_error},
               {"total_cutoff_resamples", total_resamples},
               {"truncated_replicates", total_truncated}};
    return finalize("retrieve_demo", jcfg, std::move(checks), std::move(extra),
                    std::move(files), cfg.common.out_dir);
}

// ===========================================================================
// gamma-null
// ===========================================================================

json GammaNullConfig::to_json() const {
    json j = common_to_json(common);
    j["alpha"] = alpha;
    j["m"] = m;
    j["x0s"] = x0s;
    j["schedule"] = n_schedule;
    j["replicates"] = replicates;
    j["scheffe_x"] = scheffe_x;
    j["scheffe_schedule"] = scheffe_schedule;
    j["scheffe_replicates"] = scheffe_replicates;
    j["scheffe_final_bound"] = scheffe_final_bound;
    j["contrast_x1"] = contrast_x1;
    j["contrast_x2"] = contrast_x2;
    j["contrast_eps"] = contrast_eps;
    j["contrast_replicates"] = contrast_replicates;
    return j;
}

GammaNullConfig GammaNullConfig::from_json(const json& j) {
    GammaNullConfig c;
    c.common = common_from_json(j);
    c.alpha = get_or<double>(j, "alpha", c.alpha);
    c.m = get_or<double>(j, "m", c.m);
    c.x0s = get_or<std::vector<double>>(j, "x0s", c.x0s);
    c.n_schedule = get_or<std::vector<double>>(j, "schedule", c.n_schedule);
    c.replicates = get_or<int>(j, "replicates", c.replicates);
    c.scheffe_x = get_or<double>(j, "scheffe_x", c.scheffe_x);
    c.scheffe_schedule = get_or<std::vector<double>>(j, "scheffe_schedule", c.scheffe_schedule);
    c.scheffe_replicates = get_or<long long>(j, "scheffe_replicates", c.scheffe_replicates);
    c.scheffe_final_bound = get_or<double>(j, "scheffe_final_bound", c.scheffe_final_bound);
    c.contrast_x1 = get_or<double>(j, "contrast_x1", c.contrast_x1);
    c.contrast_x2 = get_or<double>(j, "contrast_x2", c.contrast_x2);
    c.contrast_eps = get_or<double>(j, "contrast_eps", c.contrast_eps);
    c.contrast_replicates = get_or<long long>(j, "contrast_replicates", c.contrast_replicates);
    return c;
}

RunSummary run_gamma_null(const GammaNullConfig& cfg) {
    if (cfg.x0s.size() < 2) throw std::invalid_argument("gamma-null needs >= 2 x0 values");
    ensure_out_dir(cfg.common.out_dir);
    std::vector<CheckResult> checks;

    // Step-process sanity: an increasing step time-change keeps the integral
    // at zero until its first jump.
    {
        double worst = 0.0;
        auto x = make_affine(1.0, 0.5);
        const SampledPath y = integral_process(
            SampledPath{{0.0, 0.5, 1.0},
                        {x->value_at(0.0), x->value_at(0.5), x->value_at(1.0)},
                        SampledPath::Interp::linear});
        for (int r = 0; r < 100; ++r) {
            auto rng = substream(cfg.common.seed, 0x57e9, static_cast<std::uint64_t>(r));
            std::poisson_distribution<int> pois(1.0);
            const int k = pois(rng);
            std::vector<double> times;
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (int i = 0; i < k; ++i) times.push_back(unif(rng));
            std::sort(times.begin(), times.end());
            const JumpPath poisson_clock = make_jump_path(
                1.0, std::nullopt, 1.0, 0.0, times, std::vector<double>(times.size(), 1.0));
            const double first = times.empty() ? 1.0 : times.front();
            // Y(0) = 0, so Y(N_ell) must stay 0 strictly before the first jump.
            for (double ell = 0.0; ell < first; ell += first / 8.0)
                worst = std::max(worst,
                                 std::abs(y.value_at(evaluate_subordinator(poisson_clock, ell))));
        }
        checks.push_back(make_check("step_clock_zero_before_first_jump", worst == 0.0,
                                    worst, 0.0, "max |Y(N_ell)| over ell < T1"));
    }

    // Retrieval pipeline under the gamma clock, per x0.
    std::vector<GammaNullResult> results;
    std::vector<std::vector<double>> jrows;
    for (std::size_t xi = 0; xi < cfg.x0s.size(); ++xi) {
        const double x0 = cfg.x0s[xi];
        GammaNullResult res =
            gamma_null_retrieve(x0, cfg.n_schedule, cfg.alpha, cfg.m, cfg.replicates,
                                mix64(cfg.common.seed + 0x9a11a + xi));
        const double frac = res.fraction_nonzero.back();
        checks.push_back(make_check(
            "fraction_nonzero_x0_" + fmt(x0), frac < 1e-2, frac, 1e-2,
            "P(J >= 1) at n = " + fmt(cfg.n_schedule.back())));
        const double final_est = std::max(res.series.points.back().estimate_pos,
                                          res.series.points.back().estimate_neg);
        checks.push_back(make_check("estimate_collapses_x0_" + fmt(x0),
                                    final_est == 0.0, final_est, 0.0,
                                    "median estimate at the last schedule point"));
        for (std::size_t ni = 0; ni < cfg.n_schedule.size(); ++ni)
            for (std::size_t r = 0; r < res.j_raw[ni].size(); ++r)
                jrows.push_back({x0, cfg.n_schedule[ni], static_cast<double>(r),
                                 static_cast<double>(res.j_raw[ni][r])});
        results.push_back(std::move(res));
    }

    // The two x0 settings should be statistically indistinguishable.
    {
        std::vector<double> a, b;
        for (long long v : results[0].j_raw.back()) a.push_back(static_cast<double>(v));
        for (long long v : results[1].j_raw.back()) b.push_back(static_cast<double>(v));
        const stats::TestReport ks = stats::ks_two_sample(a, b, cfg.common.level);
        checks.push_back(make_check("x0_indistinguishable", ks.pass, ks.statistic,
                                    ks.threshold,
                                    "two-sample KS on J counts at the last n"));
    }

    // Density gap along the decreasing t-schedule.
    auto rng_scheffe = substream(cfg.common.seed, 0x5c4e);
    const ScheffeSeries scheffe = scheffe_gap(cfg.scheffe_x, cfg.scheffe_schedule,
                                              cfg.scheffe_replicates, rng_scheffe);
    {
        double min_z = std::numeric_limits<double>::infinity();
        for (double z : scheffe.decrease_z) min_z = std::min(min_z, z);
        checks.push_back(make_check("scheffe_strict_decrease",
                                    scheffe.strictly_decreasing_3sigma, min_z, 3.0,
                                    "min pairwise decrease z-score (want > 3)"));
        const double final_gap = scheffe.points.back().gap;
        checks.push_back(make_check("scheffe_final_gap",
                                    final_gap < cfg.scheffe_final_bound, final_gap,
                                    cfg.scheffe_final_bound,
                                    "L1 gap at t = " + fmt(scheffe.points.back().t)));
    }

    // Scaled-path classification: sharp for stable, chance-level for gamma.
    const ContrastReport contrast = stable_contrast(
        cfg.contrast_x1, cfg.contrast_x2, cfg.contrast_eps, cfg.m, cfg.alpha,
        cfg.contrast_replicates, mix64(cfg.common.seed + 0xc0a7));
    checks.push_back(make_check("stable_contrast_accuracy", contrast.accuracy > 0.9,
                                contrast.accuracy, 0.9,
                                "Poisson parameters " + fmt(contrast.lambda1) + " / " +
                                    fmt(contrast.lambda2)));
    checks.push_back(make_check(
        "gamma_contrast_chance_level",
        contrast.gamma_accuracy > 0.4 && contrast.gamma_accuracy < 0.6,
        contrast.gamma_accuracy, 0.6,
        "gamma intensities " + fmt(contrast.gamma_lambda1) + " / " +
            fmt(contrast.gamma_lambda2)));

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/gamma_null_jcounts.csv", jcfg,
              {"x0", "n", "replicate", "J"}, jrows, files);
    std::vector<std::vector<double>> srows;
    for (std::size_t k = 0; k < scheffe.points.size(); ++k)
        srows.push_back({scheffe.points[k].t, scheffe.points[k].gap, scheffe.points[k].se,
                         k < scheffe.decrease_z.size() ? scheffe.decrease_z[k]
                                                       : std::numeric_limits<double>::quiet_NaN()});
    write_csv(cfg.common.out_dir + "/gamma_null_scheffe.csv", jcfg,
              {"t", "gap", "se", "decrease_z"}, srows, files);

    json extra{{"stable_contrast",
                json{{"accuracy", contrast.accuracy},
                     {"bayes_accuracy", contrast.bayes_accuracy},
                     {"gamma_accuracy", contrast.gamma_accuracy},
                     {"lambda1", contrast.lambda1},
                     {"lambda2", contrast.lambda2},
                     {"gamma_lambda1", contrast.gamma_lambda1},
                     {"gamma_lambda2", contrast.gamma_lambda2}}}};
    json fractions = json::array();
    for (std::size_t xi = 0; xi < results.size(); ++xi)
        fractions.push_back(json{{"x0", cfg.x0s[xi]},
                                 {"fraction_nonzero", results[xi].fraction_nonzero}});
    extra["fractions"] = fractions;
    return finalize("gamma_null", jcfg, std::move(checks), std::move(extra),
                    std::move(files), cfg.common.out_dir);
}

// ===========================================================================
// prop2-demo
// ===========================================================================

json Prop2Config::to_json() const {
    json j = common_to_json(common);
    j["alpha"] = alpha;
    j["m"] = m;
    j["process"] = process.to_string();
    j["tail_eps"] = tail_eps;
    j["tail_xs"] = tail_xs;
    j["tail_replicates"] = tail_replicates;
    j["schedule"] = n_schedule;
    j["replicates"] = replicates;
    j["em_step"] = em_step;
    j["tolerance"] = tolerance;
    j["k_a"] = k_a;
    j["k_x0"] = k_x0;
    j["k_eta"] = k_eta;
    j["k_schedule"] = k_n_schedule;
    j["k_replicates"] = k_replicates;
    return j;
}

Prop2Config Prop2Config::from_json(const json& j) {
    Prop2Config c;
    c.common = common_from_json(j);
    c.alpha = get_or<double>(j, "alpha", c.alpha);
    c.m = get_or<double>(j, "m", c.m);
    if (j.contains("process")) c.process = ProcessSpec::parse(j.at("process"));
    c.tail_eps = get_or<double>(j, "tail_eps", c.tail_eps);
    c.tail_xs = get_or<std::vector<double>>(j, "tail_xs", c.tail_xs);
    c.tail_replicates = get_or<int>(j, "tail_replicates", c.tail_replicates);
    c.n_schedule = get_or<std::vector<double>>(j, "schedule", c.n_schedule);
    c.replicates = get_or<int>(j, "replicates", c.replicates);
    c.em_step = get_or<double>(j, "em_step", c.em_step);
    c.tolerance = get_or<double>(j, "tolerance", c.tolerance);
    c.k_a = get_or<double>(j, "k_a", c.k_a);
    c.k_x0 = get_or<double>(j, "k_x0", c.k_x0);
    c.k_eta = get_or<double>(j, "k_eta", c.k_eta);
    c.k_n_schedule = get_or<std::vector<double>>(j, "k_schedule", c.k_n_schedule);
    c.k_replicates = get_or<int>(j, "k_replicates", c.k_replicates);
    return c;
}

RunSummary run_prop2_demo(const Prop2Config& cfg) {
    if (cfg.process.kind != ProcessSpec::Kind::constant &&
        cfg.process.kind != ProcessSpec::Kind::hoelder_test)
        throw std::invalid_argument("prop2-demo supports constant or hoelder processes");
    if (!(cfg.m > 2.0 / cfg.alpha))
        throw std::invalid_argument("prop2-demo requires m > 2/alpha");
    ensure_out_dir(cfg.common.out_dir);

    std::vector<CheckResult> checks;
    // Subordinator sized so the subordinate-BM Levy tail is exactly x^{-2 alpha}.
    const double k_tail = bm_tail_coefficient(cfg.alpha);

    // --- Part A: jump tails of the subordinate Brownian motion -------------
    const std::size_t nx = cfg.tail_xs.size();
    double x_min = *std::min_element(cfg.tail_xs.begin(), cfg.tail_xs.end());
    const double tail_delta = std::min(x_min * x_min / 32.0, 1e-6);
    auto tail_counts = replicate_map<std::vector<long long>>(
        cfg.tail_replicates, cfg.common.threads, [&](int r) {
            auto rng = substream(cfg.common.seed, 0xb1, static_cast<std::uint64_t>(r));
            const JumpPath path =
                sample_stable_jumps(cfg.alpha, k_tail, cfg.tail_eps, tail_delta, rng);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<long long> counts(nx, 0);
            for (double sz : path.sizes) {
                const double db = std::sqrt(sz) * gauss(rng);
                for (std::size_t xi = 0; xi < nx; ++xi)
                    if (std::abs(db) > cfg.tail_xs[xi]) ++counts[xi];
            }
            return counts;
        });

    std::vector<std::vector<double>> tail_rows;
    for (std::size_t xi = 0; xi < nx; ++xi) {
        std::vector<double> c(tail_counts.size());
        for (std::size_t r = 0; r < tail_counts.size(); ++r)
            c[r] = static_cast<double>(tail_counts[r][xi]);
        const double got = stats::mean(c);
        const double se = stats::standard_error(c);
        const double want =
            cfg.tail_eps * std::pow(cfg.tail_xs[xi], -2.0 * cfg.alpha);
        const double z = std::abs(got - want) / se;
        checks.push_back(make_check("bm_jump_tail_x_" + fmt(cfg.tail_xs[xi]), z <= 3.0,
                                    z, 3.0,
                                    "mean " + fmt(got) + " vs " + fmt(want)));
        tail_rows.push_back({cfg.tail_xs[xi], want, got, se, z});
    }

    // --- Part B: |X_0| estimator from squared increment counts --------------
    const double x0 = cfg.process.x0;
    ItoOptions ito;
    ito.em_step = cfg.em_step;
    ito.min_steps = cfg.process.kind == ProcessSpec::Kind::constant ? 1 : 4;

    std::vector<CountPoint> medians;
    for (std::size_t ni = 0; ni < cfg.n_schedule.size(); ++ni) {
        const double n = cfg.n_schedule[ni];
        const double eps = 1.0 / n;
        const double threshold = std::pow(eps, cfg.m);
        const double guard = std::max(1.0, x0 * x0) * 32.0;
        const double delta = std::min(threshold / guard, 1e-6);
        auto js = replicate_map<double>(cfg.replicates, cfg.common.threads, [&](int r) {
            auto rng_path = substream(cfg.common.seed, 0xb2, ni, static_cast<std::uint64_t>(r));
            auto rng_b = substream(cfg.common.seed, 0xb3, ni, static_cast<std::uint64_t>(r));
            const JumpPath path = sample_stable_jumps(cfg.alpha, k_tail, eps, delta, rng_path);
            auto x = make_deterministic_evaluator(cfg.process);
            long long j = 0;
            for_each_jump_delta_i(*x, path, eps, ito, rng_b, [&](const JumpDelta& d) {
                if (d.delta_i * d.delta_i > threshold) ++j;
            });
            return static_cast<double>(j);
        });
        medians.push_back({n, median_of(js), 0.0});
    }
    const EstimateSeries series = estimate_x0(medians, cfg.alpha, cfg.m,
                                              ExponentMode::stochastic, std::abs(x0));
    {
        const double est = series.points.back().estimate_pos;
        const double rel = std::abs(est - std::abs(x0)) / std::abs(x0);
        checks.push_back(make_check("abs_x0_estimate", rel <= cfg.tolerance, rel,
                                    cfg.tolerance,
                                    "estimate " + fmt(est) + " vs |x0| " + fmt(std::abs(x0))));
    }

    // --- Part C: residual-count decay ---------------------------------------
    const double breach = hoelder_breach_time(cfg.k_eta, 20.0);
    std::vector<std::vector<double>> k_rows;
    std::vector<double> k_scaled;
    for (std::size_t ni = 0; ni < cfg.k_n_schedule.size(); ++ni) {
        const double n = cfg.k_n_schedule[ni];
        const double eps = 1.0 / n;
        const double threshold = std::pow(eps, cfg.m);
        const double delta = std::min(threshold / 32.0, 1e-6);
        struct KRep { double k = 0.0; bool regime = true; };
        auto reps = replicate_map<KRep>(cfg.k_replicates, cfg.common.threads, [&](int r) {
            auto rng_path = substream(cfg.common.seed, 0xb4, ni, static_cast<std::uint64_t>(r));
            auto rng_b = substream(cfg.common.seed, 0xb5, ni, static_cast<std::uint64_t>(r));
            const JumpPath path = sample_stable_jumps(cfg.alpha, k_tail, eps, delta, rng_path);
            auto x = make_hoelder_test(cfg.k_x0, cfg.k_eta);
            ItoOptions kito;
            kito.em_step = cfg.em_step;
            const KCount kc = count_K(*x, path, eps, cfg.m, cfg.k_a, kito, rng_b, breach);
            return KRep{static_cast<double>(kc.count), kc.in_hoelder_regime};
        });
        double mean_k_regime = 0.0;
        double regime_frac = 0.0;
        for (const KRep& r : reps) {
            if (r.regime) mean_k_regime += r.k;
            regime_frac += r.regime ? 1.0 : 0.0;
        }
        mean_k_regime /= static_cast<double>(reps.size());
        regime_frac /= static_cast<double>(reps.size());
        const double scaled = std::pow(eps, cfg.alpha * cfg.m - 1.0) * mean_k_regime;
        k_scaled.push_back(scaled);
        k_rows.push_back({n, eps, mean_k_regime, scaled, regime_frac});
    }
    {
        bool all_zero = std::all_of(k_scaled.begin(), k_scaled.end(),
                                    [](double v) { return v == 0.0; });
        bool decreasing = true;
        for (std::size_t k = 1; k < k_scaled.size(); ++k)
            if (!(k_scaled[k] < k_scaled[k - 1])) decreasing = false;
        std::string serialized;
        for (double v : k_scaled) serialized += fmt(v) + std::string(" ");
        checks.push_back(make_check("residual_count_decay", all_zero || decreasing,
                                    all_zero || decreasing ? 0.0 : 1.0, 0.0,
                                    "scaled series: " + serialized));
    }

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/prop2_tail.csv", jcfg,
              {"x", "expected", "mean", "se", "z"}, tail_rows, files);
    std::vector<std::vector<double>> series_rows;
    for (const EstimatePoint& p : series.points)
        series_rows.push_back({p.n, p.j_pos, p.scaled_pos, p.estimate_pos});
    write_csv(cfg.common.out_dir + "/prop2_estimates.csv", jcfg,
              {"n", "J", "scaled", "estimate"}, series_rows, files);
    write_csv(cfg.common.out_dir + "/prop2_kseries.csv", jcfg,
              {"n", "eps", "mean_K_regime", "scaled_K", "regime_fraction"}, k_rows,
              files);

    json extra{{"target_abs_x0", std::abs(x0)},
               {"final_estimate", series.points.back().estimate_pos},
               {"hoelder_breach_time", breach}};
    return finalize("prop2_demo", jcfg, std::move(checks), std::move(extra),
                    std::move(files), cfg.common.out_dir);
}

// ===========================================================================
// markov-probe
// ===========================================================================

json MarkovProbeConfig::to_json() const {
    json j = common_to_json(common);
    j["clock"] = clock;
    j["ell"] = ell;
    j["ell_prime"] = ell_prime;
    j["replicates"] = replicates;
    j["dt"] = dt;
    j["bins"] = bins;
    j["horizon_quantile"] = horizon_quantile;
    j["refine_tol"] = refine_tol;
    j["normalization"] = normalization_name(normalization);
    return j;
}

MarkovProbeConfig MarkovProbeConfig::from_json(const json& j) {
    MarkovProbeConfig c;
    c.common = common_from_json(j);
    c.clock = get_or<std::string>(j, "clock", c.clock);
    c.ell = get_or<double>(j, "ell", c.ell);
    c.ell_prime = get_or<double>(j, "ell_prime", c.ell_prime);
    c.replicates = get_or<int>(j, "replicates", c.replicates);
    c.dt = get_or<double>(j, "dt", c.dt);
    c.bins = get_or<int>(j, "bins", c.bins);
    c.horizon_quantile = get_or<double>(j, "horizon_quantile", c.horizon_quantile);
    c.refine_tol = get_or<double>(j, "refine_tol", c.refine_tol);
    c.normalization = parse_normalization(
        get_or<std::string>(j, "normalization", normalization_name(c.normalization)));
    return c;
}

RunSummary run_markov_probe(const MarkovProbeConfig& cfg) {
    if (cfg.clock != "bessel" && cfg.clock != "identity")
        throw std::invalid_argument("clock must be 'bessel' or 'identity'");
    if (!(cfg.ell > 0.0)) throw std::invalid_argument("ell must be positive");
    if (cfg.bins < 2) throw std::invalid_argument("need at least 2 bins");
    ensure_out_dir(cfg.common.out_dir);

    const bool bessel = cfg.clock == "bessel";
    const StableConfig stable{0.5, cfg.normalization};
    std::vector<CheckResult> checks;

    struct Row { double r1 = 0.0, h1 = 0.0, dh = 0.0; bool truncated = false; };
    const double cap = cfg.ell_prime > 0.0
                           ? marginal_quantile_or_mc(stable, cfg.ell + cfg.ell_prime,
                                                     cfg.horizon_quantile, cfg.common.seed)
                           : marginal_quantile_or_mc(stable, cfg.ell, cfg.horizon_quantile,
                                                     cfg.common.seed);

    auto rows = replicate_map<Row>(cfg.replicates, cfg.common.threads, [&](int i) {
        Row row;
        auto rng = substream(cfg.common.seed, 0x3a7, static_cast<std::uint64_t>(i));
        const double tau1 = sample_stable_marginal(stable, cfg.ell, rng);
        const double dtau = cfg.ell_prime > 0.0
                                ? sample_stable_marginal(stable, cfg.ell_prime, rng)
                                : 0.0;
        if (!bessel) {
            // Control: the clock is the subordinator itself; the Bessel level is
            // an exact independent marginal.
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double s = std::sqrt(tau1);
            row.r1 = std::hypot(1.0 + s * gauss(rng), s * gauss(rng));
            row.h1 = tau1;
            row.dh = dtau;
            return row;
        }
        const double tau2 = tau1 + dtau;
        row.truncated = tau2 > cap;
        const double t2 = std::max(std::min(tau2, cap), 1e-12);
        const double t1 = std::min(tau1, t2);
        const BesselWithClock sim =
            simulate_bessel2_with_clock(stretched_grid(t2, cfg.dt), cfg.refine_tol, rng);
        row.r1 = sim.bessel.value_at(t1);
        row.h1 = sim.clock.value_at(t1);
        row.dh = sim.clock.value_at(t2) - row.h1;
        return row;
    });

    // Rank-based contrast: within each clock-level bin, does the distribution
    // of the next increment shift across Bessel-level groups?  Rank form keeps
    // the statistic finite under the heavy-tailed increment law.
    const std::size_t nrep = rows.size();
    std::vector<std::size_t> order(nrep);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows[a].h1 < rows[b].h1; });

    const int b_count = cfg.bins;
    double kw_sum = 0.0;
    double dof = 0.0;
    long long truncated = 0;
    std::vector<std::vector<double>> cell_rows;
    for (const Row& r : rows) truncated += r.truncated ? 1 : 0;

    for (int hb = 0; hb < b_count; ++hb) {
        const std::size_t lo = nrep * static_cast<std::size_t>(hb) / b_count;
        const std::size_t hi = nrep * static_cast<std::size_t>(hb + 1) / b_count;
        const std::size_t nb = hi - lo;
        if (nb < static_cast<std::size_t>(2 * b_count)) continue;

        std::vector<std::size_t> bin(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                     order.begin() + static_cast<std::ptrdiff_t>(hi));
        // Rank dh within the bin.
        std::vector<std::size_t> by_dh = bin;
        std::sort(by_dh.begin(), by_dh.end(),
                  [&](std::size_t a, std::size_t b) { return rows[a].dh < rows[b].dh; });
        std::vector<double> rank(nrep, 0.0);
        for (std::size_t k = 0; k < by_dh.size(); ++k)
            rank[by_dh[k]] = static_cast<double>(k + 1);

        // Group by Bessel level within the bin.
        std::sort(bin.begin(), bin.end(),
                  [&](std::size_t a, std::size_t b) { return rows[a].r1 < rows[b].r1; });
        const double nbd = static_cast<double>(nb);
        double kw = 0.0;
        for (int g = 0; g < b_count; ++g) {
            const std::size_t glo = nb * static_cast<std::size_t>(g) / b_count;
            const std::size_t ghi = nb * static_cast<std::size_t>(g + 1) / b_count;
            if (ghi <= glo) continue;
            double mean_rank = 0.0, mean_dh = 0.0;
            for (std::size_t k = glo; k < ghi; ++k) {
                mean_rank += rank[bin[k]];
                mean_dh += rows[bin[k]].dh;
            }
            const double ng = static_cast<double>(ghi - glo);
            mean_rank /= ng;
            mean_dh /= ng;
            const double dev = mean_rank - (nbd + 1.0) / 2.0;
            kw += ng * dev * dev;
            cell_rows.push_back({static_cast<double>(hb), static_cast<double>(g), ng,
                                 mean_rank, mean_dh});
        }
        kw *= 12.0 / (nbd * (nbd + 1.0));
        kw_sum += kw;
        dof += static_cast<double>(b_count - 1);
    }
    const double z = (kw_sum - dof) / std::sqrt(2.0 * dof);
    const bool detected = z > 3.0;

    if (cfg.ell_prime == 0.0) {
        // Degenerate increment: the clock does not move at all.
        double max_dh = 0.0;
        for (const Row& r : rows) max_dh = std::max(max_dh, std::abs(r.dh));
        checks.push_back(make_check("zero_ell_prime_identity", max_dh == 0.0, max_dh,
                                    0.0, "clock increment over an empty interval"));
    } else if (bessel) {
        checks.push_back(make_check("bessel_level_dependence_detected", detected, z, 3.0,
                                    "rank contrast z across Bessel-level groups"));
    } else {
        checks.push_back(make_check("control_no_dependence", !detected, z, 3.0,
                                    "control clock should show no dependence"));
    }

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/markov_probe_cells.csv", jcfg,
              {"h_bin", "r_bin", "count", "mean_rank", "mean_dh"}, cell_rows, files);

    json extra{{"kw_sum", kw_sum},
               {"dof", dof},
               {"z", z},
               {"dependence_detected", detected},
               {"truncation_frequency",
                static_cast<double>(truncated) / static_cast<double>(nrep)}};
    return finalize("markov_probe", jcfg, std::move(checks), std::move(extra),
                    std::move(files), cfg.common.out_dir);
}

// ===========================================================================
// poisson-gof
// ===========================================================================

json PoissonGofConfig::to_json() const {
    json j = common_to_json(common);
    j["alpha"] = alpha;
    j["m"] = m;
    j["eps_list"] = eps_list;
    j["b_list"] = b_list;
    j["paths"] = paths;
    return j;
}

PoissonGofConfig PoissonGofConfig::from_json(const json& j) {
    PoissonGofConfig c;
    c.common = common_from_json(j);
    c.alpha = get_or<double>(j, "alpha", c.alpha);
    c.m = get_or<double>(j, "m", c.m);
    c.eps_list = get_or<std::vector<double>>(j, "eps_list", c.eps_list);
    c.b_list = get_or<std::vector<double>>(j, "b_list", c.b_list);
    c.paths = get_or<int>(j, "paths", c.paths);
    return c;
}

RunSummary run_poisson_gof(const PoissonGofConfig& cfg) {
    ensure_out_dir(cfg.common.out_dir);
    std::vector<CheckResult> checks;
    std::vector<std::vector<double>> rows;

    std::uint64_t cell = 0;
    for (double eps : cfg.eps_list) {
        for (double b : cfg.b_list) {
            const double threshold = std::pow(eps, cfg.m);
            const double delta = std::min(threshold / (2.0 * b), 1e-6);
            const double lambda =
                std::pow(b, cfg.alpha) * std::pow(eps, 1.0 - cfg.m * cfg.alpha);
            const std::uint64_t cell_id = cell++;
            auto counts = replicate_map<long long>(
                cfg.paths, cfg.common.threads, [&](int r) {
                    auto rng = substream(cfg.common.seed, 0x90f, cell_id,
                                         static_cast<std::uint64_t>(r));
                    const JumpPath path =
                        sample_stable_jumps(cfg.alpha, 1.0, eps, delta, rng);
                    return count_N(path, b, eps, cfg.m);
                });
            const stats::TestReport gof =
                stats::chi_square_poisson_gof(counts, lambda, cfg.common.level);
            checks.push_back(make_check(
                "poisson_gof_eps_" + fmt(eps) + "_b_" + fmt(b), gof.pass,
                gof.statistic, gof.threshold, "lambda " + fmt(lambda)));
            rows.push_back({eps, b, lambda, gof.statistic, gof.threshold,
                            gof.pass ? 1.0 : 0.0});
        }
    }

    std::vector<std::string> files;
    const json jcfg = cfg.to_json();
    write_csv(cfg.common.out_dir + "/poisson_gof.csv", jcfg,
              {"eps", "b", "lambda", "statistic", "threshold", "pass"}, rows, files);
    return finalize("poisson_gof", jcfg, std::move(checks), json{}, std::move(files),
                    cfg.common.out_dir);
}

}  // namespace tcir::experiments
