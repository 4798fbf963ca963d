#include "tcir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace tcir::stats {

double ks_critical_coefficient(double level) {
    if (level <= 0.0 || level >= 1.0)
        throw std::invalid_argument("ks_critical_coefficient: level must be in (0,1)");
    return std::sqrt(-0.5 * std::log(level / 2.0));
}

TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double level) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");

    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }

    TestReport r;
    r.name = "ks_two_sample";
    r.statistic = d;
    r.level = level;
    r.threshold = ks_critical_coefficient(level) * std::sqrt((na + nb) / (na * nb));
    r.pass = r.statistic <= r.threshold;
    r.n_a = sa.size();
    r.n_b = sb.size();
    return r;
}

TestReport chi_square_poisson_gof(std::span<const long long> counts, double lambda,
                                  double level) {
    if (lambda < 0.0) throw std::invalid_argument("chi_square_poisson_gof: lambda < 0");

    TestReport r;
    r.name = "chi_square_poisson_gof";
    r.level = level;
    r.n_a = counts.size();

    if (lambda == 0.0) {
        // Degenerate exact case: Poisson(0) puts all mass at zero.
        bool all_zero = std::all_of(counts.begin(), counts.end(),
                                    [](long long c) { return c == 0; });
        r.statistic = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
        r.threshold = 0.0;
        r.pass = all_zero;
        return r;
    }

    if (counts.size() < 500)
        throw std::invalid_argument("chi_square_poisson_gof: need at least 500 counts");

    long long max_count = 0;
    for (long long c : counts) {
        if (c < 0) throw std::invalid_argument("chi_square_poisson_gof: negative count");
        max_count = std::max(max_count, c);
    }

    const double n = static_cast<double>(counts.size());

    // Expected counts per value k, then pooled so each cell's expectation >= 5.
    // The final cell absorbs the full upper tail, so expected mass sums to n.
    const long long k_hi = std::max<long long>(
        max_count, static_cast<long long>(lambda + 12.0 * std::sqrt(lambda) + 12.0));
    std::vector<double> pmf(static_cast<std::size_t>(k_hi) + 1);
    pmf[0] = std::exp(-lambda);
    for (long long k = 1; k <= k_hi; ++k)
        pmf[static_cast<std::size_t>(k)] =
            pmf[static_cast<std::size_t>(k - 1)] * lambda / static_cast<double>(k);

    std::vector<long long> observed_by_k(static_cast<std::size_t>(k_hi) + 1, 0);
    for (long long c : counts) ++observed_by_k[static_cast<std::size_t>(c)];

    struct Cell { double expected; long long observed; };
    std::vector<Cell> cells;
    double exp_acc = 0.0;
    long long obs_acc = 0;
    double mass_acc = 0.0;
    for (long long k = 0; k <= k_hi; ++k) {
        exp_acc += n * pmf[static_cast<std::size_t>(k)];
        mass_acc += pmf[static_cast<std::size_t>(k)];
        obs_acc += observed_by_k[static_cast<std::size_t>(k)];
        if (exp_acc >= 5.0) {
            cells.push_back({exp_acc, obs_acc});
            exp_acc = 0.0;
            obs_acc = 0;
        }
    }
    // Upper tail beyond k_hi (observed there is zero by construction of k_hi).
    exp_acc += n * (1.0 - mass_acc);
    if (!cells.empty()) {
        cells.back().expected += exp_acc;
        cells.back().observed += obs_acc;
    }

    if (cells.size() < 2)
        throw std::invalid_argument("chi_square_poisson_gof: pooling left fewer than 2 cells");

    double stat = 0.0;
    for (const Cell& c : cells) {
        const double d = static_cast<double>(c.observed) - c.expected;
        stat += d * d / c.expected;
    }

    r.statistic = stat;
    r.threshold = chi_square_quantile(1.0 - level,
                                      static_cast<double>(cells.size() - 1));
    r.pass = r.statistic <= r.threshold;
    return r;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) /
           static_cast<double>(sorted_.size());
}

double quantile(std::vector<double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::sort(samples.begin(), samples.end());
    const double h = p * static_cast<double>(samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= samples.size()) return samples.back();
    const double w = h - static_cast<double>(lo);
    return (1.0 - w) * samples[lo] + w * samples[lo + 1];
}

std::vector<double> quantiles(std::vector<double> samples, std::span<const double> probs) {
    std::sort(samples.begin(), samples.end());
    std::vector<double> out;
    out.reserve(probs.size());
    for (double p : probs) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantiles: p outside [0,1]");
        const double h = p * static_cast<double>(samples.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        if (lo + 1 >= samples.size()) {
            out.push_back(samples.back());
        } else {
            const double w = h - static_cast<double>(lo);
            out.push_back((1.0 - w) * samples[lo] + w * samples[lo + 1]);
        }
    }
    return out;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need >= 2 values");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double chi_square_quantile(double p, double dof) {
    return boost::math::quantile(boost::math::chi_squared(dof), p);
}

double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal(), p);
}

double poisson_cdf(long long k, double lambda) {
    if (k < 0) return 0.0;
    if (lambda == 0.0) return 1.0;
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    for (long long i = 1; i <= k; ++i) {
        pmf *= lambda / static_cast<double>(i);
        cdf += pmf;
    }
    return std::min(cdf, 1.0);
}

}  // namespace tcir::stats
