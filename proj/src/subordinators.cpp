#include "tcir/subordinators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace tcir {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("stability index must lie strictly inside (0,1)");
}

// Sorted uniform order statistics on [0, horizon] via exponential spacings.
std::vector<double> sorted_uniform_times(std::size_t n, double horizon,
                                         std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> t(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += exp1(rng);
        t[i] = acc;
    }
    acc += exp1(rng);
    const double scale = horizon / acc;
    for (double& v : t) v *= scale;
    return t;
}

}  // namespace

double StableConfig::tail_coefficient() const {
    validate();
    switch (normalization) {
        case StableNorm::paper_tail:
            return 1.0;
        case StableNorm::first_passage:
            // Laplace exponent sqrt(2 lambda) = K Gamma(1/2) lambda^{1/2}.
            if (alpha != 0.5)
                throw std::invalid_argument(
                    "first-passage normalization is defined for alpha = 1/2 only");
            return std::sqrt(2.0 / kPi);
    }
    throw std::logic_error("unreachable");
}

void StableConfig::validate() const { check_alpha(alpha); }

JumpPath make_jump_path(double horizon, std::optional<double> alpha, double cutoff,
                        double compensation_rate, std::vector<double> times,
                        std::vector<double> sizes) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
    if (compensation_rate < 0.0)
        throw std::invalid_argument("compensation rate must be nonnegative");
    if (alpha) check_alpha(*alpha);
    if (times.size() != sizes.size())
        throw std::invalid_argument("times and sizes must have equal length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0 && times[i] <= horizon))
            throw std::invalid_argument("jump time outside [0, horizon]");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("jump times must be strictly increasing");
        if (!(sizes[i] >= cutoff))
            throw std::invalid_argument("jump size below cutoff");
    }
    JumpPath p;
    p.horizon = horizon;
    p.cutoff = cutoff;
    p.compensation_rate = compensation_rate;
    p.alpha = alpha;
    p.times = std::move(times);
    p.sizes = std::move(sizes);
    return p;
}

// ---------------------------------------------------------------------------
// Stable subordinator
// ---------------------------------------------------------------------------

double stable_compensation_rate(double alpha, double tail_coefficient, double delta) {
    check_alpha(alpha);
    if (!(delta > 0.0)) throw std::invalid_argument("cutoff must be positive");
    return tail_coefficient * alpha * std::pow(delta, 1.0 - alpha) / (1.0 - alpha);
}

JumpPath sample_stable_jumps(double alpha, double tail_coefficient, double horizon,
                             double delta, std::mt19937_64& rng) {
    check_alpha(alpha);
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("cutoff must be positive");
    if (!(tail_coefficient > 0.0))
        throw std::invalid_argument("tail coefficient must be positive");

    const double rate = tail_coefficient * std::pow(delta, -alpha);
    std::poisson_distribution<long long> pois(horizon * rate);
    const auto n = static_cast<std::size_t>(pois(rng));

    JumpPath p;
    p.horizon = horizon;
    p.cutoff = delta;
    p.compensation_rate = stable_compensation_rate(alpha, tail_coefficient, delta);
    p.alpha = alpha;
    p.times = sorted_uniform_times(n, horizon, rng);
    p.sizes.resize(n);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const bool half = (alpha == 0.5);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 1.0 - unif(rng);  // in (0, 1]
        p.sizes[i] = half ? delta / (u * u) : delta * std::pow(u, -1.0 / alpha);
    }
    return p;
}

JumpPath sample_stable_jumps(const StableConfig& cfg, double horizon, double delta,
                             std::mt19937_64& rng) {
    return sample_stable_jumps(cfg.alpha, cfg.tail_coefficient(), horizon, delta, rng);
}

double standard_positive_stable(double alpha, std::mt19937_64& rng) {
    check_alpha(alpha);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> exp1(1.0);
    const double phi = std::max(unif(rng), 1e-300) * kPi;
    const double e = std::max(exp1(rng), 1e-300);
    const double b = std::pow(std::sin(alpha * phi), alpha / (1.0 - alpha)) *
                     std::sin((1.0 - alpha) * phi) /
                     std::pow(std::sin(phi), 1.0 / (1.0 - alpha));
    return std::pow(b / e, (1.0 - alpha) / alpha);
}

double stable_marginal_scale(const StableConfig& cfg, double ell) {
    if (!(ell >= 0.0)) throw std::invalid_argument("ell must be nonnegative");
    const double k = cfg.tail_coefficient();
    return std::pow(ell * k * std::tgamma(1.0 - cfg.alpha), 1.0 / cfg.alpha);
}

double sample_stable_marginal(const StableConfig& cfg, double ell, std::mt19937_64& rng) {
    if (!(ell > 0.0)) throw std::invalid_argument("ell must be positive");
    if (cfg.normalization == StableNorm::first_passage) {
        cfg.tail_coefficient();  // validates alpha = 1/2
        std::normal_distribution<double> gauss(0.0, 1.0);
        double g = gauss(rng);
        while (g == 0.0) g = gauss(rng);
        return ell * ell / (g * g);
    }
    return stable_marginal_scale(cfg, ell) * standard_positive_stable(cfg.alpha, rng);
}

double stable_marginal_quantile(const StableConfig& cfg, double ell, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0,1)");
    if (cfg.alpha != 0.5)
        throw std::invalid_argument(
            "closed-form marginal quantile implemented for alpha = 1/2 only");
    // tau_ell = scale * 1/(2 G^2); P(tau <= q) = P(G^2 >= scale/(2q)) = 2 Phi(-sqrt(scale/(2q))).
    // Invert: sqrt(scale/(2q)) = -Phi^{-1}(p/2).
    const double scale = stable_marginal_scale(cfg, ell);
    const double z = -boost::math::quantile(boost::math::normal(), p / 2.0);
    return scale / (2.0 * z * z);
}

// ---------------------------------------------------------------------------
// Gamma subordinator
// ---------------------------------------------------------------------------

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("E1 requires x > 0");
    return boost::math::expint(1, x);
}

double gamma_jump_rate(double delta) { return exp_integral_e1(delta); }

double gamma_compensation_rate(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("cutoff must be positive");
    return 1.0 - std::exp(-delta);
}

JumpPath sample_gamma_jumps(double horizon, double delta, std::mt19937_64& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("cutoff must be positive");

    std::poisson_distribution<long long> pois(horizon * gamma_jump_rate(delta));
    const auto n = static_cast<std::size_t>(pois(rng));

    JumpPath p;
    p.horizon = horizon;
    p.cutoff = delta;
    p.compensation_rate = gamma_compensation_rate(delta);
    p.times = sorted_uniform_times(n, horizon, rng);
    p.sizes.resize(n);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> exp1(1.0);

    // Rejection sampling from the density proportional to exp(-x)/x on [delta, inf).
    auto draw_size = [&]() -> double {
        if (delta >= 1.0) {
            // Envelope exp(-(x - delta)); acceptance delta/x.
            for (;;) {
                const double x = delta + exp1(rng);
                if (unif(rng) * x <= delta) return x;
            }
        }
        // Piecewise envelope: 1/x on [delta, 1), exp(-x) on [1, inf).
        const double m1 = std::log(1.0 / delta);
        const double m2 = std::exp(-1.0);
        for (;;) {
            if (unif(rng) * (m1 + m2) < m1) {
                const double x = delta * std::exp(unif(rng) * m1);
                if (unif(rng) <= std::exp(-x)) return x;
            } else {
                const double x = 1.0 + exp1(rng);
                if (unif(rng) * x <= 1.0) return x;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i) p.sizes[i] = draw_size();
    return p;
}

double sample_gamma_marginal(double t, std::mt19937_64& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    std::gamma_distribution<double> g(t, 1.0);
    return g(rng);
}

// ---------------------------------------------------------------------------
// Path operations
// ---------------------------------------------------------------------------

double evaluate_subordinator(const JumpPath& path, double ell) {
    if (!(ell >= 0.0 && ell <= path.horizon))
        throw std::out_of_range("evaluate_subordinator: ell outside [0, horizon]");
    double s = path.compensation_rate * ell;
    for (std::size_t i = 0; i < path.times.size() && path.times[i] <= ell; ++i)
        s += path.sizes[i];
    return s;
}

JumpPath restart_increment(const JumpPath& path, double ell) {
    if (!(ell >= 0.0 && ell < path.horizon))
        throw std::out_of_range("restart_increment: ell outside [0, horizon)");
    JumpPath p;
    p.horizon = path.horizon - ell;
    p.cutoff = path.cutoff;
    p.compensation_rate = path.compensation_rate;
    p.alpha = path.alpha;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        if (path.times[i] > ell) {
            p.times.push_back(path.times[i] - ell);
            p.sizes.push_back(path.sizes[i]);
        }
    }
    return p;
}

JumpPath scale_jump_sizes(const JumpPath& path, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    JumpPath p = path;
    p.cutoff *= factor;
    p.compensation_rate *= factor;
    for (double& x : p.sizes) x *= factor;
    return p;
}

double bm_tail_coefficient(double alpha) {
    check_alpha(alpha);
    // E|G|^{2 alpha} = 2^alpha Gamma(alpha + 1/2) / Gamma(1/2).
    const double moment =
        std::pow(2.0, alpha) * std::tgamma(alpha + 0.5) / std::sqrt(kPi);
    return 1.0 / moment;
}

}  // namespace tcir
