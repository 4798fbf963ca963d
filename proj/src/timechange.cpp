#include "tcir/timechange.hpp"

#include <algorithm>
#include <cmath>

namespace tcir {

SampledPath subordinate(ProcessEvaluator& x, const JumpPath& path,
                        std::span<const double> grid) {
    SampledPath out;
    out.interp = SampledPath::Interp::left_constant;
    out.times.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());

    double acc = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < out.times.size(); ++k) {
        const double ell = out.times[k];
        if (k > 0 && !(ell > out.times[k - 1]))
            throw std::invalid_argument("subordinate: grid must be strictly increasing");
        if (!(ell >= 0.0 && ell <= path.horizon))
            throw std::out_of_range("subordinate: grid point outside [0, horizon]");
        while (j < path.times.size() && path.times[j] <= ell) acc += path.sizes[j++];
        out.values[k] = x.value_at(path.compensation_rate * ell + acc);
    }
    return out;
}

namespace {

// Trapezoid with node doubling; tracks integrand extrema over every node seen.
// The interval is [a, a + len] with len carried exactly.
IntegralEstimate adaptive_trapezoid(ProcessEvaluator& x, double a, double len,
                                    const QuadratureOptions& quad) {
    const double fa = x.value_at(a);
    const double fb = x.value_at(a + len);
    IntegralEstimate est;
    est.x_min = std::min(fa, fb);
    est.x_max = std::max(fa, fb);

    int intervals = x.trapezoid_exact() ? 1 : std::max(1, quad.initial_nodes - 1);
    auto sum_midlevels = [&](int n_intervals) {
        // Interior nodes at resolution n_intervals (n_intervals - 1 of them).
        double s = 0.0;
        for (int i = 1; i < n_intervals; ++i) {
            const double f = x.value_at(a + len * static_cast<double>(i) /
                                                static_cast<double>(n_intervals));
            est.x_min = std::min(est.x_min, f);
            est.x_max = std::max(est.x_max, f);
            s += f;
        }
        return s;
    };

    double interior = sum_midlevels(intervals);
    double integral = len * (0.5 * (fa + fb) + interior) / static_cast<double>(intervals);
    if (x.trapezoid_exact()) {
        est.value = integral;
        return est;
    }
    while (intervals < quad.max_nodes) {
        // Fresh pass at doubled resolution; re-queries of revealed points are
        // consistent for stateful integrands.
        const int next = intervals * 2;
        const double interior2 = sum_midlevels(next);
        const double integral2 =
            len * (0.5 * (fa + fb) + interior2) / static_cast<double>(next);
        const bool settled = std::abs(integral2 - integral) <=
                             quad.rel_tol * std::max(std::abs(integral2), 1e-300);
        intervals = next;
        integral = integral2;
        if (settled) break;
    }
    est.value = integral;
    return est;
}

}  // namespace

void for_each_jump_delta_y(ProcessEvaluator& x, const JumpPath& path, double eps,
                           const QuadratureOptions& quad,
                           const std::function<void(const JumpDelta&)>& fn) {
    if (!(eps >= 0.0 && eps <= path.horizon))
        throw std::out_of_range("for_each_jump_delta_y: eps outside [0, horizon]");
    if (quad.initial_nodes < 2)
        throw std::invalid_argument("quadrature needs at least 2 nodes");

    double acc = 0.0;
    for (std::size_t i = 0; i < path.times.size() && path.times[i] <= eps; ++i) {
        JumpDelta d;
        d.s = path.times[i];
        d.tau_minus = path.compensation_rate * d.s + acc;
        d.delta_tau = path.sizes[i];
        d.tau_plus = d.tau_minus + d.delta_tau;
        acc += path.sizes[i];

        IntegralEstimate est;
        if (auto hint = x.integrate(d.tau_minus, d.delta_tau)) {
            est = *hint;
        } else {
            est = adaptive_trapezoid(x, d.tau_minus, d.delta_tau, quad);
        }
        d.delta_y = est.value;
        d.x_min = est.x_min;
        d.x_max = est.x_max;
        fn(d);
    }
}

std::vector<JumpDelta> jump_deltas_Y(ProcessEvaluator& x, const JumpPath& path,
                                     double eps, const QuadratureOptions& quad) {
    std::vector<JumpDelta> out;
    for_each_jump_delta_y(x, path, eps, quad,
                          [&](const JumpDelta& d) { out.push_back(d); });
    return out;
}

void for_each_jump_delta_i(ProcessEvaluator& x, const JumpPath& path, double eps,
                           const ItoOptions& ito, std::mt19937_64& rng,
                           const std::function<void(const JumpDelta&)>& fn) {
    if (!(eps >= 0.0 && eps <= path.horizon))
        throw std::out_of_range("for_each_jump_delta_i: eps outside [0, horizon]");
    if (!(ito.em_step > 0.0))
        throw std::invalid_argument("Euler-Maruyama step must be positive");
    if (ito.min_steps < 1) throw std::invalid_argument("min_steps must be >= 1");

    std::normal_distribution<double> gauss(0.0, 1.0);
    const double x0 = x.initial_value();

    double acc = 0.0;
    for (std::size_t i = 0; i < path.times.size() && path.times[i] <= eps; ++i) {
        JumpDelta d;
        d.s = path.times[i];
        d.tau_minus = path.compensation_rate * d.s + acc;
        d.delta_tau = path.sizes[i];
        d.tau_plus = d.tau_minus + d.delta_tau;
        acc += path.sizes[i];

        const long long wanted =
            static_cast<long long>(std::ceil(d.delta_tau / ito.em_step));
        const long long steps =
            std::clamp<long long>(wanted, ito.min_steps, ito.max_steps);
        const double h = d.delta_tau / static_cast<double>(steps);
        const double sh = std::sqrt(h);

        const double x_left = x.value_at(d.tau_minus);
        double integral = 0.0;
        double db_total = 0.0;
        for (long long k = 0; k < steps; ++k) {
            const double t = d.tau_minus + h * static_cast<double>(k);
            const double db = sh * gauss(rng);
            integral += x.value_at(t) * db;
            db_total += db;
        }
        d.delta_i = integral;
        d.delta_b = db_total;
        d.term_x0 = x0 * db_total;
        d.term_level = (x_left - x0) * db_total;
        d.term_residual = integral - x_left * db_total;
        fn(d);
    }
}

std::vector<JumpDelta> jump_deltas_I(ProcessEvaluator& x, const JumpPath& path,
                                     double eps, const ItoOptions& ito,
                                     std::mt19937_64& rng) {
    std::vector<JumpDelta> out;
    for_each_jump_delta_i(x, path, eps, ito, rng,
                          [&](const JumpDelta& d) { out.push_back(d); });
    return out;
}

}  // namespace tcir
