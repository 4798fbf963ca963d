#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tcir/rng.hpp"
#include "tcir/stats.hpp"

using namespace tcir;
using namespace tcir::stats;

TEST_CASE("ks critical coefficient at the 1% level") {
    CHECK(ks_critical_coefficient(0.01) == doctest::Approx(1.627624).epsilon(1e-5));
}

TEST_CASE("ks two-sample: identical samples give statistic 0") {
    std::vector<double> a{0.3, 1.7, 2.2, 5.0};
    auto r = ks_two_sample(a, a, 0.01);
    CHECK(r.statistic == 0.0);
    CHECK(r.pass);
}

TEST_CASE("ks two-sample: disjoint supports give statistic 1") {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
        a.push_back(0.1 * i);        // in [0, 1]
        b.push_back(2.0 + 0.1 * i);  // in [2, 3]
    }
    auto r = ks_two_sample(a, b, 0.01);
    CHECK(r.statistic == 1.0);
    CHECK_FALSE(r.pass);
}

TEST_CASE("ks two-sample: hand-enumerated ECDF gap") {
    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{1.5, 2.5};
    auto r = ks_two_sample(a, b, 0.01);
    CHECK(r.statistic == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ks two-sample: empty sample is a parameter error") {
    std::vector<double> a{1.0};
    std::vector<double> empty;
    CHECK_THROWS_AS(ks_two_sample(a, empty, 0.01), std::invalid_argument);
}

TEST_CASE("ks statistic invariant under strictly monotone transforms") {
    auto rng = substream(11, 1);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a(400), b(300);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = 0.3 + g(rng);
    const double d0 = ks_two_sample(a, b, 0.01).statistic;
    for (auto& v : a) v = std::exp(v);
    for (auto& v : b) v = std::exp(v);
    const double d1 = ks_two_sample(a, b, 0.01).statistic;
    CHECK(d0 == d1);
    CHECK(d0 >= 0.0);
    CHECK(d0 <= 1.0);
}

TEST_CASE("poisson gof: reference Poisson counts pass at ~ the declared rate") {
    int passes = 0;
    const int runs = 100;
    for (int run = 0; run < runs; ++run) {
        auto rng = substream(42, static_cast<std::uint64_t>(run));
        std::poisson_distribution<long long> pois(7.0);
        std::vector<long long> counts(600);
        for (auto& c : counts) c = pois(rng);
        if (chi_square_poisson_gof(counts, 7.0, 0.01).pass) ++passes;
    }
    // Expected pass rate 99%; 95/100 leaves generous slack.
    CHECK(passes >= 95);
}

TEST_CASE("poisson gof: all-zero counts against lambda = 31.62 fail") {
    std::vector<long long> counts(1000, 0);
    auto r = chi_square_poisson_gof(counts, 31.62, 0.01);
    CHECK_FALSE(r.pass);
}

TEST_CASE("poisson gof: degenerate lambda = 0") {
    std::vector<long long> zeros(600, 0);
    CHECK(chi_square_poisson_gof(zeros, 0.0, 0.01).pass);
    std::vector<long long> with_one(600, 0);
    with_one[17] = 1;
    CHECK_FALSE(chi_square_poisson_gof(with_one, 0.0, 0.01).pass);
}

TEST_CASE("poisson gof: parameter errors") {
    std::vector<long long> few(100, 3);
    CHECK_THROWS_AS(chi_square_poisson_gof(few, 3.0, 0.01), std::invalid_argument);
    // A tiny lambda pools everything into one cell.
    std::vector<long long> counts(600, 0);
    CHECK_THROWS_AS(chi_square_poisson_gof(counts, 1e-9, 0.01), std::invalid_argument);
}

TEST_CASE("ecdf step behaviour") {
    EmpiricalCdf f({1.0});
    CHECK(f(0.99) == 0.0);
    CHECK(f(1.0) == 1.0);
    CHECK(f(1.0 + 1e-9) == 1.0);
}

TEST_CASE("quantile: median of {1,2,3} is 2") {
    CHECK(quantile({1.0, 2.0, 3.0}, 0.5) == 2.0);
}

TEST_CASE("ecdf of uniforms meets the DKW-style bound in most runs") {
    const std::size_t n = 2000;
    const double bound = 1.63 / std::sqrt(static_cast<double>(n));
    int ok = 0;
    for (int run = 0; run < 20; ++run) {
        auto rng = substream(7, static_cast<std::uint64_t>(run));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> u(n);
        for (auto& v : u) v = unif(rng);
        EmpiricalCdf f(u);
        double gap = 0.0;
        const auto& s = f.sorted();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
            const double lo = static_cast<double>(i) / static_cast<double>(n);
            gap = std::max({gap, std::abs(hi - s[i]), std::abs(lo - s[i])});
        }
        if (gap < bound) ++ok;
    }
    CHECK(ok >= 18);
}

TEST_CASE("chi-square quantile oracle values") {
    CHECK(chi_square_quantile(0.5, 1.0) == doctest::Approx(0.454936).epsilon(1e-5));
    CHECK(chi_square_quantile(0.001, 1.0) ==
          doctest::Approx(1.5708e-6).epsilon(1e-3));
}
