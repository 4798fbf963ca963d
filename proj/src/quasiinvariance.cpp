#include "tcir/quasiinvariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcir/retrieval.hpp"
#include "tcir/rng.hpp"
#include "tcir/stats.hpp"
#include "tcir/subordinators.hpp"

namespace tcir {

double rn_density(double x, double t, double gamma_t) {
    if (!(x > 0.0)) throw std::domain_error("rn_density: scale must be positive");
    if (t < 0.0) throw std::invalid_argument("rn_density: t must be nonnegative");
    if (gamma_t < 0.0) throw std::invalid_argument("rn_density: gamma_t must be nonnegative");
    return std::exp(-t * std::log(x) + (1.0 - 1.0 / x) * gamma_t);
}

ChangeOfMeasureReport verify_change_of_measure(double x, double t, long long replicates,
                                               std::mt19937_64& rng) {
    if (!(x > 0.0)) throw std::domain_error("verify_change_of_measure: x must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("verify_change_of_measure: t must be positive");
    if (replicates < 2) throw std::invalid_argument("verify_change_of_measure: replicates >= 2");

    std::gamma_distribution<double> half(t / 2.0, 1.0);
    std::vector<double> w(static_cast<std::size_t>(replicates));
    std::vector<double> wg(w.size());
    std::vector<double> wg2(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double g_half = half(rng);
        const double g_full = g_half + half(rng);
        const double weight = rn_density(x, t, g_full);
        w[i] = weight;
        wg[i] = weight * g_half;
        wg2[i] = weight * g_half * g_half;
    }

    ChangeOfMeasureReport r;
    r.x = x;
    r.t = t;
    r.replicates = replicates;
    r.mean_weight = stats::mean(w);
    r.mean_weight_se = stats::standard_error(w);
    r.weighted_mean = stats::mean(wg);
    r.weighted_mean_se = stats::standard_error(wg);
    r.weighted_mean_target = x * t / 2.0;  // E[x gamma_{t/2}]
    r.weighted_second = stats::mean(wg2);
    r.weighted_second_se = stats::standard_error(wg2);
    r.weighted_second_target = x * x * (t / 2.0) * (t / 2.0 + 1.0);  // E[(x gamma_{t/2})^2]

    auto within = [](double got, double want, double se) {
        return std::abs(got - want) <= 3.0 * se || got == want;
    };
    r.pass = within(r.mean_weight, 1.0, r.mean_weight_se) &&
             within(r.weighted_mean, r.weighted_mean_target, r.weighted_mean_se) &&
             within(r.weighted_second, r.weighted_second_target, r.weighted_second_se);
    return r;
}

ScheffeSeries scheffe_gap(double x, std::span<const double> t_schedule,
                          long long replicates, std::mt19937_64& rng) {
    if (!(x > 0.0)) throw std::domain_error("scheffe_gap: x must be positive");
    if (t_schedule.empty()) throw std::invalid_argument("scheffe_gap: empty schedule");
    for (std::size_t k = 1; k < t_schedule.size(); ++k)
        if (!(t_schedule[k] < t_schedule[k - 1]))
            throw std::invalid_argument("scheffe_gap: schedule must decrease");

    // One gamma path per replicate, evaluated at every schedule point.
    std::vector<double> ts_sorted(t_schedule.begin(), t_schedule.end());
    std::sort(ts_sorted.begin(), ts_sorted.end());

    const std::size_t np = t_schedule.size();
    std::vector<std::vector<double>> dev(np);  // |density - 1| per point, per replicate
    for (auto& v : dev) v.resize(static_cast<std::size_t>(replicates));

    for (long long r = 0; r < replicates; ++r) {
        double g = 0.0;
        double t_prev = 0.0;
        for (std::size_t k = 0; k < np; ++k) {
            const double t = ts_sorted[k];
            std::gamma_distribution<double> inc(t - t_prev, 1.0);
            g += inc(rng);
            t_prev = t;
            // Map back to the schedule's (descending) ordering.
            const std::size_t idx = np - 1 - k;
            dev[idx][static_cast<std::size_t>(r)] = std::abs(rn_density(x, t, g) - 1.0);
        }
    }

    ScheffeSeries out;
    out.points.resize(np);
    for (std::size_t k = 0; k < np; ++k) {
        out.points[k].t = t_schedule[k];
        out.points[k].gap = stats::mean(dev[k]);
        out.points[k].se = stats::standard_error(dev[k]);
    }
    out.strictly_decreasing_3sigma = true;
    for (std::size_t k = 0; k + 1 < np; ++k) {
        std::vector<double> diff(static_cast<std::size_t>(replicates));
        for (std::size_t r = 0; r < diff.size(); ++r)
            diff[r] = dev[k][r] - dev[k + 1][r];
        const double z = stats::mean(diff) / stats::standard_error(diff);
        out.decrease_z.push_back(z);
        if (!(z > 3.0)) out.strictly_decreasing_3sigma = false;
    }
    return out;
}

namespace {

// Exact accuracy of the likelihood-ratio rule between Poisson(l1) and
// Poisson(l2) with equal priors.
double two_poisson_bayes_accuracy(double l1, double l2) {
    if (l1 == l2) return 0.5;
    if (l1 > l2) std::swap(l1, l2);
    // Classify as l2 iff count > c*.
    const double cstar = (l2 - l1) / std::log(l2 / l1);
    const auto k = static_cast<long long>(std::floor(cstar));
    const double err1 = 1.0 - stats::poisson_cdf(k, l1);  // P(N1 > c*)
    const double err2 = stats::poisson_cdf(k, l2);        // P(N2 <= c*)
    return 1.0 - 0.5 * (err1 + err2);
}

}  // namespace

ContrastReport stable_contrast(double x1, double x2, double eps, double m,
                               double alpha, long long replicates,
                               std::uint64_t seed) {
    if (!(x1 > 0.0 && x2 > 0.0))
        throw std::invalid_argument("stable_contrast: scales must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("stable_contrast: eps must be positive");
    if (replicates < 1) throw std::invalid_argument("stable_contrast: replicates >= 1");

    ContrastReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    rep.m = m;
    rep.x1 = x1;
    rep.x2 = x2;

    const double threshold = std::pow(eps, m);
    const double xmax = std::max(x1, x2);
    const double delta = std::min(threshold / (2.0 * xmax), 1e-6);

    rep.lambda1 = std::pow(x1, alpha) * std::pow(eps, 1.0 - m * alpha);
    rep.lambda2 = std::pow(x2, alpha) * std::pow(eps, 1.0 - m * alpha);
    rep.bayes_accuracy = two_poisson_bayes_accuracy(rep.lambda1, rep.lambda2);

    rep.gamma_lambda1 = eps * gamma_jump_rate(threshold / x1);
    rep.gamma_lambda2 = eps * gamma_jump_rate(threshold / x2);

    auto classify = [](long long count, double l1, double l2,
                       std::mt19937_64& rng) -> int {
        if (l1 == l2) return std::uniform_int_distribution<int>(0, 1)(rng);
        const double lo = std::min(l1, l2), hi = std::max(l1, l2);
        const double cstar = (hi - lo) / std::log(hi / lo);
        const bool is_hi = static_cast<double>(count) > cstar;
        return (is_hi == (l2 > l1)) ? 1 : 0;
    };

    long long correct_stable = 0;
    long long correct_gamma = 0;
    for (long long r = 0; r < replicates; ++r) {
        const int truth = static_cast<int>(r % 2);  // balanced classes
        const double x_true = truth == 0 ? x1 : x2;

        auto rng_s = substream(seed, 0xc0a7, 1, static_cast<std::uint64_t>(r));
        const JumpPath path = sample_stable_jumps(alpha, 1.0, eps, delta, rng_s);
        // The observer sees x tau; its jumps clear eps^m exactly when b = x does.
        const long long n_obs = count_N(path, x_true, eps, m);
        if (classify(n_obs, rep.lambda1, rep.lambda2, rng_s) == truth) ++correct_stable;

        auto rng_g = substream(seed, 0xc0a7, 2, static_cast<std::uint64_t>(r));
        const JumpPath gpath = sample_gamma_jumps(eps, delta, rng_g);
        const long long g_obs = count_N(gpath, x_true, eps, m);
        if (classify(g_obs, rep.gamma_lambda1, rep.gamma_lambda2, rng_g) == truth)
            ++correct_gamma;
    }
    rep.accuracy = static_cast<double>(correct_stable) / static_cast<double>(replicates);
    rep.gamma_accuracy = static_cast<double>(correct_gamma) / static_cast<double>(replicates);
    return rep;
}

}  // namespace tcir
