// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Run all criteria with no arguments, or a subset: ./acceptance c1 c3 c7
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tcir/experiments.hpp"
#include "tcir/retrieval.hpp"
#include "tcir/rng.hpp"
#include "tcir/stats.hpp"
#include "tcir/subordinators.hpp"
#include "tcir/timechange.hpp"

using namespace tcir;
using namespace tcir::experiments;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string id;
    std::string label;
    std::function<bool(std::string&)> run;  // fills a detail string
};

std::string out_root() {
    const fs::path p = fs::temp_directory_path() / "tcir_acceptance";
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- c1: Poisson law of the counting statistic ------------------------------
bool c1_poisson_law(std::string& detail) {
    const double eps = 0.1, m = 5.0, b = 1.0;
    const double lambda = std::pow(b, 0.5) * std::pow(eps, 1.0 - m * 0.5);  // 31.62
    std::vector<long long> counts(5000);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto rng = substream(1001, i);
        const JumpPath p =
            sample_stable_jumps(StableConfig{0.5, StableNorm::paper_tail}, eps, 1e-6, rng);
        counts[i] = count_N(p, b, eps, m);
    }
    const stats::TestReport gof = stats::chi_square_poisson_gof(counts, lambda, 0.01);
    std::ostringstream os;
    os << "chi2 " << gof.statistic << " vs " << gof.threshold << " (lambda " << lambda
       << ", 5000 paths)";
    detail = os.str();
    return gof.pass;
}

// --- c2: Theorem-1 retrieval for constant integrands -------------------------
bool c2_retrieval(std::string& detail) {
    RetrieveConfig cfg;
    cfg.common.seed = 1002;
    cfg.common.out_dir = out_root() + "/c2_pos";
    cfg.alpha = 0.5;
    cfg.m = 5.0;
    cfg.replicates = 200;
    cfg.process = ProcessSpec::parse("constant:2");
    cfg.tolerance = 0.15;
    cfg.monotone_points = 5;
    const RunSummary pos = run_retrieve_demo(cfg);

    cfg.common.out_dir = out_root() + "/c2_neg";
    cfg.common.seed = 1003;
    cfg.process = ProcessSpec::parse("constant:-2");
    const RunSummary neg = run_retrieve_demo(cfg);

    std::ostringstream os;
    os << "x0=2: est " << pos.json["results"]["final_estimate_pos"].get<double>()
       << "; x0=-2: est_neg " << neg.json["results"]["final_estimate_neg"].get<double>()
       << ", est_pos " << neg.json["results"]["final_estimate_pos"].get<double>();
    detail = os.str();
    return pos.all_pass && neg.all_pass;
}

// --- c3: the clock identity --------------------------------------------------
bool c3_e0(std::string& detail) {
    E0Config cfg;
    cfg.common.seed = 1004;
    cfg.common.out_dir = out_root() + "/c3";
    cfg.ell = 1.0;
    cfg.samples = 10000;
    cfg.dt = 1e-4;
    const RunSummary s = run_e0_check(cfg);
    std::ostringstream os;
    os << "KS " << s.json["results"]["ks_statistic"].get<double>() << " vs "
       << s.json["results"]["ks_threshold"].get<double>() << ", truncation "
       << s.json["results"]["truncation_frequency"].get<double>();
    detail = os.str();
    return s.all_pass;
}

// --- c4: gamma null ----------------------------------------------------------
bool c4_gamma_null(std::string& detail) {
    GammaNullConfig cfg;
    cfg.common.seed = 1005;
    cfg.common.out_dir = out_root() + "/c4";
    cfg.m = 5.0;
    cfg.x0s = {1.0, 2.0};
    cfg.n_schedule = {100, 1000, 10000};
    cfg.replicates = 4000;
    cfg.scheffe_x = 2.0;
    cfg.scheffe_schedule = {1.0, 0.1, 0.01, 0.001};
    cfg.scheffe_replicates = 200000;
    const RunSummary s = run_gamma_null(cfg);
    std::ostringstream os;
    os << "checks:";
    for (const auto& c : s.checks) os << " " << c.name << (c.pass ? "+" : "-");
    detail = os.str();
    return s.all_pass;
}

// --- c5: subordinate Brownian motion -----------------------------------------
bool c5_prop2(std::string& detail) {
    Prop2Config cfg;
    cfg.common.seed = 1006;
    cfg.common.out_dir = out_root() + "/c5";
    cfg.process = ProcessSpec::parse("constant:-3");
    cfg.tolerance = 0.2;
    const RunSummary s = run_prop2_demo(cfg);
    std::ostringstream os;
    os << "|X0| est " << s.json["results"]["final_estimate"].get<double>() << " (target 3)";
    for (const auto& c : s.checks) os << "; " << c.name << (c.pass ? "+" : "-");
    detail = os.str();
    return s.all_pass;
}

// --- c6: exact stable marginal vs the path representation --------------------
bool c6_marginal(std::string& detail) {
    const StableConfig fp{0.5, StableNorm::first_passage};
    const std::size_t n = 10000;
    std::vector<double> path_side(n), exact_side(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r1 = substream(1007, i);
        auto r2 = substream(1008, i);
        const JumpPath p = sample_stable_jumps(fp, 1.0, 1e-6, r1);
        path_side[i] = evaluate_subordinator(p, 1.0);
        exact_side[i] = sample_stable_marginal(fp, 1.0, r2);  // ell^2 / G^2
    }
    const stats::TestReport ks = stats::ks_two_sample(path_side, exact_side, 0.01);
    std::ostringstream os;
    os << "KS " << ks.statistic << " vs " << ks.threshold;
    detail = os.str();
    return ks.pass;
}

// --- c7: determinism across thread counts ------------------------------------
bool c7_determinism(std::string& detail) {
    auto run_with = [&](int threads, const std::string& dir) {
        RetrieveConfig cfg;
        cfg.common.seed = 1009;
        cfg.common.threads = threads;
        cfg.common.out_dir = dir;
        cfg.n_schedule = {16, 64, 256};
        cfg.replicates = 32;
        cfg.monotone_points = 99;
        run_retrieve_demo(cfg);
    };
    const std::string d1 = out_root() + "/c7_t1";
    const std::string d4 = out_root() + "/c7_t4";
    fs::remove_all(d1);
    fs::remove_all(d4);
    run_with(1, d1);
    run_with(4, d4);

    bool identical = true;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        const std::string name = entry.path().filename().string();
        const std::string a = slurp(entry.path().string());
        const std::string b = slurp(d4 + "/" + name);
        // The out directory itself is part of the embedded config; mask it.
        std::string am = a, bm = b;
        std::string::size_type pos;
        while ((pos = am.find(d1)) != std::string::npos) am.replace(pos, d1.size(), "@");
        while ((pos = bm.find(d4)) != std::string::npos) bm.replace(pos, d4.size(), "@");
        if (am != bm) identical = false;
        ++compared;
    }
    std::ostringstream os;
    os << compared << " files compared (threads 1 vs 4)";
    detail = os.str();
    return identical && compared >= 3;
}

// --- c8: sandwich invariant ---------------------------------------------------
bool c8_sandwich(std::string& detail) {
    const double eps = 0.05, m = 5.0;
    const double threshold = std::pow(eps, m);
    long long violations = 0;
    long long total_j = 0;
    auto x = make_affine(1.0, 0.5);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        auto rng = substream(1010, i);
        double delta = std::min(threshold / 4.0, 1e-6);
        for (;;) {
            const JumpPath p = sample_stable_jumps(
                StableConfig{0.5, StableNorm::paper_tail}, eps, delta, rng);
            const double tau_eps = evaluate_subordinator(p, eps);
            const double b_lo = x->value_at(0.0);
            const double b_hi = x->value_at(tau_eps);
            if (p.cutoff > threshold / b_hi) {
                delta = 0.5 * threshold / b_hi;
                continue;
            }
            const auto deltas = jump_deltas_Y(*x, p, eps);
            const long long j = count_J(deltas, eps, m, CountSign::positive, false);
            total_j += j;
            if (!(count_N(p, b_lo, eps, m) <= j && j <= count_N(p, b_hi, eps, m)))
                ++violations;
            break;
        }
    }
    std::ostringstream os;
    os << violations << " violations over 1000 paths (total J " << total_j << ")";
    detail = os.str();
    return violations == 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {"c1", "Poisson law of N(eps, b) at (0.5, 5, 0.1, 1)", c1_poisson_law},
        {"c2", "retrieval of X0 for constant +-2", c2_retrieval},
        {"c3", "clock identity at ell = 1 (first passage)", c3_e0},
        {"c4", "gamma null: collapse, indistinguishability, density gap", c4_gamma_null},
        {"c5", "subordinate BM: tails, |X0| estimate, residual decay", c5_prop2},
        {"c6", "exact stable(1/2) marginal vs jump path at ell = 1", c6_marginal},
        {"c7", "byte-identical outputs across thread counts", c7_determinism},
        {"c8", "sandwich N(min) <= J <= N(max) with zero violations", c8_sandwich},
    };

    std::vector<std::string> wanted(argv + 1, argv + argc);
    auto selected = [&](const std::string& id) {
        if (wanted.empty()) return true;
        for (const auto& w : wanted)
            if (w == id) return true;
        return false;
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.label << " — "
                  << detail << " [" << secs << "s]\n";
        if (!pass) ++failures;
    }
    return failures;
}
