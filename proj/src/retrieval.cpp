#include "tcir/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "tcir/rng.hpp"
#include "tcir/stats.hpp"

namespace tcir {

long long count_N(const JumpPath& path, double b, double eps, double m) {
    if (!(eps > 0.0 && eps <= path.horizon))
        throw std::out_of_range("count_N: eps outside (0, horizon]");
    if (b <= 0.0) return 0;
    const double threshold = std::pow(eps, m);
    if (path.cutoff > threshold / b)
        throw truncation_error("count_N: cutoff exceeds eps^m / b; resample with smaller cutoff");
    long long c = 0;
    for (std::size_t i = 0; i < path.times.size() && path.times[i] <= eps; ++i)
        if (b * path.sizes[i] > threshold) ++c;
    return c;
}

long long count_J(std::span<const JumpDelta> deltas, double eps, double m,
                  CountSign sign, bool squared) {
    const double threshold = std::pow(eps, m);
    long long c = 0;
    for (const JumpDelta& d : deltas) {
        if (d.s > eps) continue;
        if (squared) {
            if (d.delta_i * d.delta_i > threshold) ++c;
        } else {
            const double v = sign == CountSign::positive ? d.delta_y : -d.delta_y;
            if (v > threshold) ++c;
        }
    }
    return c;
}

CountRecord make_count_record(double n, long long count, double alpha, double m) {
    if (!(m > 2.0 / alpha))
        throw std::invalid_argument("count record requires m > 2/alpha");
    if (count < 0) throw std::invalid_argument("count must be nonnegative");
    CountRecord r;
    r.n = n;
    r.count = count;
    r.alpha = alpha;
    r.m = m;
    r.scaled = std::pow(n, 1.0 - alpha * m) * static_cast<double>(count);
    return r;
}

EstimateSeries estimate_x0(std::span<const CountPoint> series, double alpha, double m,
                           ExponentMode mode, std::optional<double> target) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("estimate_x0: alpha outside (0,1)");
    if (!(m > 2.0 / alpha))
        throw std::invalid_argument("estimate_x0: requires m > 2/alpha strictly");

    const double power =
        mode == ExponentMode::lebesgue ? 1.0 / alpha : 1.0 / (2.0 * alpha);

    EstimateSeries out;
    out.alpha = alpha;
    out.m = m;
    out.mode = mode;
    out.target = target;
    out.points.reserve(series.size());
    for (const CountPoint& p : series) {
        EstimatePoint e;
        e.n = p.n;
        e.j_pos = p.j_pos;
        e.j_neg = p.j_neg;
        const double scale = std::pow(p.n, 1.0 - alpha * m);
        e.scaled_pos = scale * p.j_pos;
        e.scaled_neg = scale * p.j_neg;
        e.estimate_pos = e.scaled_pos > 0.0 ? std::pow(e.scaled_pos, power) : 0.0;
        e.estimate_neg = e.scaled_neg > 0.0 ? std::pow(e.scaled_neg, power) : 0.0;
        out.points.push_back(e);
    }
    if (target && !out.points.empty()) {
        const auto& last = out.points.back();
        const double est = *target >= 0.0 ? last.estimate_pos : last.estimate_neg;
        const double ref = std::abs(*target);
        out.final_rel_error = ref > 0.0 ? std::abs(est - ref) / ref : est;
    }
    return out;
}

KCount count_K(ProcessEvaluator& x, const JumpPath& path, double eps, double m,
               double a, const ItoOptions& ito, std::mt19937_64& rng,
               double breach_time) {
    if (!(a > 0.0)) throw std::invalid_argument("count_K: a must be positive");
    const double threshold = a * std::pow(eps, m);
    KCount out;
    for_each_jump_delta_i(x, path, eps, ito, rng, [&](const JumpDelta& d) {
        if (d.term_residual * d.term_residual > threshold) ++out.count;
    });
    out.in_hoelder_regime = evaluate_subordinator(path, eps) < breach_time;
    return out;
}

GammaNullResult gamma_null_retrieve(double x0, std::span<const double> n_schedule,
                                    double alpha, double m, int replicates,
                                    std::uint64_t seed) {
    if (!(x0 > 0.0)) throw std::invalid_argument("gamma_null_retrieve: x0 must be positive");
    if (replicates < 1) throw std::invalid_argument("gamma_null_retrieve: replicates >= 1");

    GammaNullResult out;
    std::vector<CountPoint> medians;
    for (std::size_t ni = 0; ni < n_schedule.size(); ++ni) {
        const double n = n_schedule[ni];
        const double eps = 1.0 / n;
        const double threshold = std::pow(eps, m);
        // Cutoff at the counting threshold for x0: nothing countable is truncated.
        const double delta = std::min(threshold / (2.0 * x0), 1e-6);

        std::vector<long long> js(static_cast<std::size_t>(replicates));
        std::vector<double> jsd(js.size());
        auto x = make_constant(x0);
        for (int r = 0; r < replicates; ++r) {
            auto rng = substream(seed, 0x9a11a, ni, static_cast<std::uint64_t>(r));
            const JumpPath path = sample_gamma_jumps(eps, delta, rng);
            long long j = 0;
            for_each_jump_delta_y(*x, path, eps, QuadratureOptions{}, [&](const JumpDelta& d) {
                if (d.delta_y > threshold) ++j;
            });
            js[static_cast<std::size_t>(r)] = j;
            jsd[static_cast<std::size_t>(r)] = static_cast<double>(j);
        }
        long long nonzero = std::count_if(js.begin(), js.end(),
                                          [](long long j) { return j >= 1; });
        out.fraction_nonzero.push_back(static_cast<double>(nonzero) /
                                       static_cast<double>(replicates));
        medians.push_back({n, stats::quantile(jsd, 0.5), 0.0});
        out.j_raw.push_back(std::move(js));
    }
    out.series = estimate_x0(medians, alpha, m, ExponentMode::lebesgue, x0);
    return out;
}

}  // namespace tcir
