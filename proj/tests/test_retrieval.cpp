#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tcir/retrieval.hpp"
#include "tcir/rng.hpp"
#include "tcir/stats.hpp"

using namespace tcir;

namespace {
const StableConfig kPaperHalf{0.5, StableNorm::paper_tail};
}

// ---------------------------------------------------------------------------
// count_N
// ---------------------------------------------------------------------------

TEST_CASE("count_N: nonpositive b counts nothing, for any path") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.5, 0.0, {0.05, 0.2}, {0.6, 3.0});
    CHECK(count_N(p, -1.0, 0.1, 5.0) == 0);
    CHECK(count_N(p, 0.0, 0.1, 5.0) == 0);
}

TEST_CASE("count_N: single jump, direct count") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 1e-6, 0.0, {0.05}, {0.3});
    CHECK(count_N(p, 1.0, 0.1, 5.0) == 1);  // 0.3 > 0.1^5
    // Same jump but falling after eps.
    const JumpPath q = make_jump_path(1.0, std::nullopt, 1e-6, 0.0, {0.15}, {0.3});
    CHECK(count_N(q, 1.0, 0.1, 5.0) == 0);
}

TEST_CASE("count_N: cutoff guard forces resampling") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.5, 0.0, {0.05}, {0.6});
    // eps^m / b = 1e-5 < cutoff 0.5.
    CHECK_THROWS_AS(count_N(p, 1.0, 0.1, 5.0), truncation_error);
    CHECK_THROWS_AS(count_N(p, 1.0, 1.5, 5.0), std::out_of_range);
}

TEST_CASE("count_N: Poisson law at (alpha, m, eps, b) = (0.5, 5, 0.1, 1)") {
    const double lambda = std::pow(0.1, -1.5);  // 31.62
    std::vector<long long> counts(5000);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto rng = substream(61, i);
        const JumpPath p = sample_stable_jumps(kPaperHalf, 0.1, 1e-6, rng);
        counts[i] = count_N(p, 1.0, 0.1, 5.0);
    }
    CHECK(stats::chi_square_poisson_gof(counts, lambda, 0.01).pass);
}

TEST_CASE("count_N: empirical mean matches b^alpha eps^{1 - m alpha}") {
    std::vector<double> counts(10000);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto rng = substream(62, i);
        const JumpPath p = sample_stable_jumps(kPaperHalf, 0.1, 1e-6, rng);
        counts[i] = static_cast<double>(count_N(p, 1.0, 0.1, 5.0));
    }
    const double want = std::pow(0.1, -1.5);
    CHECK(std::abs(stats::mean(counts) - want) <= 3.0 * stats::standard_error(counts));
}

// ---------------------------------------------------------------------------
// count_J
// ---------------------------------------------------------------------------

TEST_CASE("count_J: constant X reduces to count_N with b = x0") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto rng = substream(63, i);
        const double eps = 0.2;
        const JumpPath p = sample_stable_jumps(kPaperHalf, eps, 1e-8, rng);
        auto x = make_constant(1.7);
        const auto deltas = jump_deltas_Y(*x, p, eps);
        CHECK(count_J(deltas, eps, 5.0, CountSign::positive, false) ==
              count_N(p, 1.7, eps, 5.0));
    }
}

TEST_CASE("count_J: negative constant X yields zero positive counts") {
    auto rng = substream(64);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 0.2, 1e-8, rng);
    auto x = make_constant(-1.7);
    const auto deltas = jump_deltas_Y(*x, p, 0.2);
    CHECK(count_J(deltas, 0.2, 5.0, CountSign::positive, false) == 0);
    CHECK(count_J(deltas, 0.2, 5.0, CountSign::negative, false) ==
          count_N(p, 1.7, 0.2, 5.0));
}

TEST_CASE("count_J: empty deltas count zero") {
    std::vector<JumpDelta> empty;
    CHECK(count_J(empty, 0.1, 5.0, CountSign::positive, false) == 0);
    CHECK(count_J(empty, 0.1, 5.0, CountSign::positive, true) == 0);
}

TEST_CASE("sandwich: path extrema counts bracket count_J for affine X") {
    // X increasing: extrema over [0, tau_eps] sit at the endpoints.
    const double eps = 0.05;
    const double m = 5.0;
    int violations = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        auto rng = substream(65, i);
        const double threshold = std::pow(eps, m);
        double delta = std::min(threshold / 4.0, 1e-6);
        auto x = make_affine(1.0, 0.5);
        for (;;) {
            const JumpPath p = sample_stable_jumps(kPaperHalf, eps, delta, rng);
            const double tau_eps = evaluate_subordinator(p, eps);
            const double b_lo = x->value_at(0.0);
            const double b_hi = x->value_at(tau_eps);
            if (p.cutoff > threshold / b_hi) {
                delta = 0.5 * threshold / b_hi;
                continue;
            }
            const auto deltas = jump_deltas_Y(*x, p, eps);
            const long long j = count_J(deltas, eps, m, CountSign::positive, false);
            if (!(count_N(p, b_lo, eps, m) <= j && j <= count_N(p, b_hi, eps, m)))
                ++violations;
            break;
        }
    }
    CHECK(violations == 0);
}

// ---------------------------------------------------------------------------
// estimate_x0
// ---------------------------------------------------------------------------

TEST_CASE("estimate: zero counts give a zero estimate") {
    std::vector<CountPoint> pts{{100.0, 0.0, 0.0}};
    const auto series = estimate_x0(pts, 0.5, 5.0, ExponentMode::lebesgue);
    CHECK(series.points[0].estimate_pos == 0.0);
    CHECK(series.points[0].estimate_neg == 0.0);
}

TEST_CASE("estimate: formula evaluation (n=100, J=2000, alpha=0.5, m=5)") {
    std::vector<CountPoint> pts{{100.0, 2000.0, 0.0}};
    const auto series = estimate_x0(pts, 0.5, 5.0, ExponentMode::lebesgue);
    CHECK(series.points[0].scaled_pos == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(series.points[0].estimate_pos == doctest::Approx(4.0).epsilon(1e-12));
    // Stochastic mode takes the 1/(2 alpha) root instead.
    const auto s2 = estimate_x0(pts, 0.5, 5.0, ExponentMode::stochastic);
    CHECK(s2.points[0].estimate_pos == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("estimate: m <= 2/alpha violates the theory") {
    std::vector<CountPoint> pts{{100.0, 10.0, 0.0}};
    CHECK_THROWS_AS(estimate_x0(pts, 0.5, 4.0, ExponentMode::lebesgue),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_x0(pts, 0.5, 3.9, ExponentMode::lebesgue),
                    std::invalid_argument);
}

TEST_CASE("estimate: Monte Carlo median recovers X = 2 at moderate n") {
    // 200 paths at n = 1024; the acceptance suite drives n to 2^14.
    const double n = 1024.0;
    const double eps = 1.0 / n;
    const double m = 5.0;
    const double threshold = std::pow(eps, m);
    std::vector<double> js(200);
    for (std::size_t i = 0; i < js.size(); ++i) {
        auto rng = substream(66, i);
        const JumpPath p =
            sample_stable_jumps(kPaperHalf, eps, threshold / 4.0, rng);
        auto x = make_constant(2.0);
        const auto deltas = jump_deltas_Y(*x, p, eps);
        js[i] = static_cast<double>(count_J(deltas, eps, m, CountSign::positive, false));
    }
    std::vector<CountPoint> pts{{n, stats::quantile(js, 0.5), 0.0}};
    const auto series = estimate_x0(pts, 0.5, m, ExponentMode::lebesgue, 2.0);
    CHECK(std::abs(series.points[0].estimate_pos - 2.0) / 2.0 < 0.15);
    REQUIRE(series.final_rel_error.has_value());
    CHECK(*series.final_rel_error < 0.15);
}

// ---------------------------------------------------------------------------
// count_K
// ---------------------------------------------------------------------------

TEST_CASE("count_K: constant X has zero residual counts") {
    auto rng_path = substream(67);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 0.25, 1e-6, rng_path);
    auto x = make_constant(5.0);
    auto rng = substream(68);
    const KCount k = count_K(*x, p, 0.25, 5.0, 1.0, ItoOptions{}, rng,
                             std::numeric_limits<double>::infinity());
    CHECK(k.count == 0);
    CHECK(k.in_hoelder_regime);
}

TEST_CASE("count_K: enormous a counts nothing") {
    auto rng_path = substream(69);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 0.25, 1e-6, rng_path);
    auto x = make_hoelder_test(1.0, 1.0);
    auto rng = substream(70);
    const KCount k = count_K(*x, p, 0.25, 5.0, 1e12, ItoOptions{}, rng, 4.0);
    CHECK(k.count == 0);
}

TEST_CASE("count_K: regime flag reflects tau_eps vs the breach time") {
    const JumpPath small = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.5}, {0.1});
    const JumpPath big = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.5}, {10.0});
    auto x = make_hoelder_test(0.0, 1.0);
    auto rng = substream(71);
    CHECK(count_K(*x, small, 1.0, 5.0, 1.0, ItoOptions{}, rng, 4.0).in_hoelder_regime);
    CHECK_FALSE(count_K(*x, big, 1.0, 5.0, 1.0, ItoOptions{}, rng, 4.0).in_hoelder_regime);
}

// ---------------------------------------------------------------------------
// gamma_null_retrieve
// ---------------------------------------------------------------------------

TEST_CASE("gamma null: counts die out and the estimate collapses to zero") {
    const std::vector<double> schedule{100.0, 10000.0};
    const auto res = gamma_null_retrieve(1.0, schedule, 0.5, 5.0, 1500, 401);
    CHECK(res.fraction_nonzero.back() < 1e-2);
    CHECK(res.series.points.back().estimate_pos == 0.0);

    const auto res2 = gamma_null_retrieve(2.0, schedule, 0.5, 5.0, 1500, 402);
    CHECK(res2.fraction_nonzero.back() < 1e-2);
    CHECK(res2.series.points.back().estimate_pos == 0.0);

    // The two x0 settings are statistically indistinguishable at n = 10^4.
    std::vector<double> a, b;
    for (long long v : res.j_raw.back()) a.push_back(static_cast<double>(v));
    for (long long v : res2.j_raw.back()) b.push_back(static_cast<double>(v));
    CHECK(stats::ks_two_sample(a, b, 0.01).pass);
}

TEST_CASE("gamma null: expected nonzero fraction matches the E1 intensity") {
    // P(J >= 1) = 1 - exp(-eps E1(eps^m / x0)).
    const std::vector<double> schedule{10000.0};
    const auto res = gamma_null_retrieve(1.0, schedule, 0.5, 5.0, 4000, 403);
    const double eps = 1e-4;
    const double lambda = eps * gamma_jump_rate(std::pow(eps, 5.0));
    const double want = 1.0 - std::exp(-lambda);
    const double se = std::sqrt(want * (1.0 - want) / 4000.0);
    CHECK(std::abs(res.fraction_nonzero[0] - want) <= 4.0 * se);
}
