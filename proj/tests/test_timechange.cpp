#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tcir/rng.hpp"
#include "tcir/stats.hpp"
#include "tcir/subordinators.hpp"
#include "tcir/timechange.hpp"

using namespace tcir;

namespace {

const StableConfig kPaperHalf{0.5, StableNorm::paper_tail};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        g[static_cast<std::size_t>(k)] =
            lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// subordinate
// ---------------------------------------------------------------------------

TEST_CASE("subordinate: identity clock reproduces X on the grid") {
    // Unit drift, no jumps: tau_ell = ell.
    const JumpPath ident = make_jump_path(2.0, std::nullopt, 1.0, 1.0, {}, {});
    auto x = make_affine(0.5, 2.0);
    const auto grid = linspace(0.0, 2.0, 21);
    const SampledPath xs = subordinate(*x, ident, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
        CHECK(xs.values[k] == doctest::Approx(0.5 + 2.0 * grid[k]).epsilon(1e-14));
}

TEST_CASE("subordinate: constant X stays constant under any clock") {
    auto rng = substream(41);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 1.0, 0.01, rng);
    auto x = make_constant(3.25);
    const SampledPath xs = subordinate(*x, p, linspace(0.0, 1.0, 101));
    for (double v : xs.values) CHECK(v == 3.25);
}

TEST_CASE("subordinate: affine X composes with tau pointwise") {
    auto rng = substream(42);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 1.0, 0.01, rng);
    auto x = make_affine(1.0, -0.5);
    const auto grid = linspace(0.0, 1.0, 101);
    const SampledPath xs = subordinate(*x, p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double tau = evaluate_subordinator(p, grid[k]);
        CHECK(xs.values[k] == doctest::Approx(1.0 - 0.5 * tau).epsilon(1e-12));
    }
}

// ---------------------------------------------------------------------------
// jump_deltas_Y
// ---------------------------------------------------------------------------

TEST_CASE("delta Y: constant X gives x0 * delta_tau exactly") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.2}, {0.3});
    auto x = make_constant(2.0);
    const auto deltas = jump_deltas_Y(*x, p, 1.0);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].delta_y == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(deltas[0].delta_tau == 0.3);
    CHECK(deltas[0].tau_minus == 0.0);
    CHECK(deltas[0].tau_plus == 0.3);
}

TEST_CASE("delta Y: linear X over [1, 2] integrates to 1.5 exactly") {
    // Drift 1 puts tau at 1 just before the jump of size 1 at s = 1/2... use
    // compensation 2 so tau_{s-} = 1 at s = 0.5, then a unit jump spans [1, 2].
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 2.0, {0.5}, {1.0});
    auto x = make_affine(0.0, 1.0);  // X_u = u
    const auto deltas = jump_deltas_Y(*x, p, 1.0);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].tau_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(deltas[0].tau_plus == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(deltas[0].delta_y == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("delta Y: eps restricts to early jumps, ordering preserved") {
    const JumpPath p =
        make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.1, 0.4, 0.9}, {1.0, 2.0, 3.0});
    auto x = make_constant(1.0);
    const auto deltas = jump_deltas_Y(*x, p, 0.5);
    REQUIRE(deltas.size() == 2);
    CHECK(deltas[0].s == 0.1);
    CHECK(deltas[1].s == 0.4);
    CHECK(deltas[1].tau_minus == doctest::Approx(1.0));  // the first jump accumulated
}

TEST_CASE("delta Y: brownian increment ratio converges to the left value") {
    // Fixed Brownian integrand, shrinking synthetic jumps at a fixed location.
    auto x = make_brownian(1.0, substream(43));
    const double left = 0.7;
    const double x_left = x->value_at(left);
    double prev_err = std::numeric_limits<double>::infinity();
    int improvements = 0;
    for (double h : {0.5, 0.05, 0.005, 0.0005}) {
        const JumpPath p =
            make_jump_path(1.0, std::nullopt, 1e-9, left / 0.5, {0.5}, {h});
        const auto deltas = jump_deltas_Y(*x, p, 1.0);
        REQUIRE(deltas.size() == 1);
        const double err = std::abs(deltas[0].delta_y / h - x_left);
        if (err < prev_err) ++improvements;
        prev_err = err;
    }
    CHECK(improvements >= 3);
    CHECK(prev_err < 0.05);
}

TEST_CASE("delta Y: node extrema sandwich the average value") {
    auto x = make_brownian(0.0, substream(44));
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 0.0,
                                      {0.1, 0.3, 0.6}, {0.5, 1.5, 0.2});
    for (const JumpDelta& d : jump_deltas_Y(*x, p, 1.0)) {
        CHECK(d.delta_y >= d.x_min * d.delta_tau - 1e-12);
        CHECK(d.delta_y <= d.x_max * d.delta_tau + 1e-12);
    }
}

TEST_CASE("delta Y: jump lengths near the ulp of their left endpoint survive") {
    // A tiny jump riding on a large accumulated tau: the increment must be
    // x0 * delta_tau exactly, not the rounded difference of the endpoints.
    const double tiny = 8.27e-22;  // the (1/16384)^5 threshold scale
    const JumpPath p = make_jump_path(1.0, std::nullopt, tiny / 2.0, 1e-3,
                                      {0.3, 0.6}, {1e-2, 2.1 * tiny});
    auto x = make_constant(2.0);
    const auto deltas = jump_deltas_Y(*x, p, 1.0);
    REQUIRE(deltas.size() == 2);
    CHECK(deltas[1].delta_y == 2.0 * 2.1 * tiny);
    CHECK(deltas[1].delta_y > std::pow(1.0 / 16384.0, 5.0) * 2.0);

    auto aff = make_affine(2.0, 0.5);
    const auto d2 = jump_deltas_Y(*aff, p, 1.0);
    CHECK(d2[1].delta_y == doctest::Approx(2.1 * tiny * (2.0 + 0.5 * d2[1].tau_minus))
                               .epsilon(1e-9));
}

TEST_CASE("delta Y: sum over jumps plus drift equals x0 * tau for constant X") {
    auto rng = substream(45);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 1.0, 0.01, rng);
    auto x = make_constant(2.5);
    double total = 0.0;
    for (const JumpDelta& d : jump_deltas_Y(*x, p, 1.0)) total += d.delta_y;
    total += 2.5 * p.compensation_rate * 1.0;  // drift contribution to Y(tau_1)
    CHECK(total == doctest::Approx(2.5 * evaluate_subordinator(p, 1.0)).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// jump_deltas_I
// ---------------------------------------------------------------------------

TEST_CASE("delta I: constant X gives x0 * delta_B exactly, zero residuals") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.2, 0.7}, {0.3, 1.1});
    auto x = make_constant(-3.0);
    auto rng = substream(46);
    for (const JumpDelta& d : jump_deltas_I(*x, p, 1.0, ItoOptions{}, rng)) {
        CHECK(d.delta_i == doctest::Approx(-3.0 * d.delta_b).epsilon(1e-12));
        CHECK(d.term_x0 == doctest::Approx(d.delta_i).epsilon(1e-12));
        CHECK(d.term_level == 0.0);
        CHECK(std::abs(d.term_residual) <= 1e-12);
    }
}

TEST_CASE("delta I: Ito isometry for X = 1 over a fixed jump") {
    // Var(delta_i | delta_tau = 0.7) = 0.7.
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.5}, {0.7});
    auto x = make_constant(1.0);
    std::vector<double> vals(100000);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        auto rng = substream(47, i);
        const auto deltas = jump_deltas_I(*x, p, 1.0, ItoOptions{}, rng);
        vals[i] = deltas[0].delta_i;
    }
    const double var = stats::sample_variance(vals);
    const double se = 0.7 * std::sqrt(2.0 / static_cast<double>(vals.size()));
    CHECK(std::abs(var - 0.7) <= 3.0 * se);
}

TEST_CASE("delta I: decomposition identity holds for varying X") {
    auto x = make_hoelder_test(1.0, 1.0);
    auto rng_path = substream(48);
    const JumpPath p = sample_stable_jumps(kPaperHalf, 0.5, 0.001, rng_path);
    auto rng = substream(49);
    for (const JumpDelta& d : jump_deltas_I(*x, p, 0.5, ItoOptions{}, rng)) {
        CHECK(d.delta_i ==
              doctest::Approx(d.term_x0 + d.term_level + d.term_residual).epsilon(1e-10));
    }
}

TEST_CASE("delta I: nonpositive EM step is a parameter error") {
    const JumpPath p = make_jump_path(1.0, std::nullopt, 0.01, 0.0, {0.5}, {0.7});
    auto x = make_constant(1.0);
    auto rng = substream(50);
    ItoOptions bad;
    bad.em_step = 0.0;
    CHECK_THROWS_AS(jump_deltas_I(*x, p, 1.0, bad, rng), std::invalid_argument);
}

TEST_CASE("subordinate BM: jump tail count scales as eps * x^{-2 alpha}") {
    // Three sigma check at one x; the experiment suite covers the full grid.
    const double alpha = 0.5;
    const double eps = 0.5;
    const double x_thr = 1.0;
    const double k = bm_tail_coefficient(alpha);
    std::vector<double> counts(20000);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto rng = substream(51, i);
        const JumpPath p = sample_stable_jumps(alpha, k, eps, 1e-5, rng);
        std::normal_distribution<double> g;
        long long c = 0;
        for (double sz : p.sizes)
            if (std::abs(std::sqrt(sz) * g(rng)) > x_thr) ++c;
        counts[i] = static_cast<double>(c);
    }
    const double want = eps * std::pow(x_thr, -2.0 * alpha);
    CHECK(std::abs(stats::mean(counts) - want) <= 3.0 * stats::standard_error(counts));
}

TEST_CASE("subordinate BM at eps matches a symmetric stable reference") {
    // B(tau_eps) from the path pipeline vs sqrt(marginal) * G.
    const double eps = 1.0;
    const std::size_t n = 10000;
    std::vector<double> path_side(n), ref_side(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r1 = substream(52, i);
        auto r2 = substream(53, i);
        std::normal_distribution<double> g;
        const JumpPath p = sample_stable_jumps(kPaperHalf, eps, 1e-6, r1);
        path_side[i] = std::sqrt(evaluate_subordinator(p, eps)) * g(r1);
        ref_side[i] = std::sqrt(sample_stable_marginal(kPaperHalf, eps, r2)) * g(r2);
    }
    CHECK(stats::ks_two_sample(path_side, ref_side, 0.01).pass);
}
