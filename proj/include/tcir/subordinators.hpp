#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace tcir {

// Raised when a jump-size cutoff is too coarse for a requested counting
// threshold; callers resample with a smaller cutoff.
class truncation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class StableNorm {
    paper_tail,     // Levy measure tail  x^{-alpha}
    first_passage,  // Laplace exponent sqrt(2 lambda); alpha = 1/2 only
};

struct StableConfig {
    double alpha = 0.5;
    StableNorm normalization = StableNorm::paper_tail;

    // K in  nu_bar(x) = K x^{-alpha}.
    double tail_coefficient() const;
    void validate() const;
};

// A subordinator path on [0, horizon]: the jumps at or above `cutoff`, plus a
// linear drift equal to the mean rate of the sub-cutoff jump mass.  Evaluation
// ell -> tau_ell is nondecreasing and right-continuous with tau_0 = 0.
struct JumpPath {
    double horizon = 0.0;
    double cutoff = 0.0;
    double compensation_rate = 0.0;
    std::optional<double> alpha;  // stability index; empty for gamma paths
    std::vector<double> times;    // strictly increasing, within [0, horizon]
    std::vector<double> sizes;    // one per time, each >= cutoff

    std::size_t jump_count() const { return times.size(); }
};

// Validating constructor for hand-built paths.
JumpPath make_jump_path(double horizon, std::optional<double> alpha, double cutoff,
                        double compensation_rate, std::vector<double> times,
                        std::vector<double> sizes);

// ---------------------------------------------------------------------------
// Stable subordinator
// ---------------------------------------------------------------------------

// Mean of sub-cutoff jump mass per unit time: K * alpha * delta^{1-alpha} / (1-alpha).
double stable_compensation_rate(double alpha, double tail_coefficient, double delta);

// Jumps above `delta` on [0, horizon]: count Poisson(horizon * K * delta^{-alpha}),
// sizes i.i.d. Pareto with survival (x/delta)^{-alpha}, times uniform (sorted).
JumpPath sample_stable_jumps(double alpha, double tail_coefficient, double horizon,
                             double delta, std::mt19937_64& rng);
JumpPath sample_stable_jumps(const StableConfig& cfg, double horizon, double delta,
                             std::mt19937_64& rng);

// Kanter's representation of the standard positive stable law,
// E exp(-l S) = exp(-l^alpha).
double standard_positive_stable(double alpha, std::mt19937_64& rng);

// tau_ell ~ scale * S with scale = (ell * K * Gamma(1-alpha))^{1/alpha}.
double stable_marginal_scale(const StableConfig& cfg, double ell);
double sample_stable_marginal(const StableConfig& cfg, double ell, std::mt19937_64& rng);

// Closed-form quantile of the marginal; implemented for alpha = 1/2
// (Levy distribution), throws otherwise.
double stable_marginal_quantile(const StableConfig& cfg, double ell, double p);

// K making the subordinate-Brownian-motion Levy tail exactly x^{-2 alpha}:
// 1 / E|G|^{2 alpha} for a standard normal G.
double bm_tail_coefficient(double alpha);

// ---------------------------------------------------------------------------
// Gamma subordinator (Levy density exp(-x)/x)
// ---------------------------------------------------------------------------

double exp_integral_e1(double x);
double gamma_jump_rate(double delta);          // E1(delta)
double gamma_compensation_rate(double delta);  // 1 - exp(-delta)

JumpPath sample_gamma_jumps(double horizon, double delta, std::mt19937_64& rng);
double sample_gamma_marginal(double t, std::mt19937_64& rng);  // Gamma(t, 1)

// ---------------------------------------------------------------------------
// Path operations
// ---------------------------------------------------------------------------

// tau_ell = compensation_rate * ell + sum of jump sizes with time <= ell.
double evaluate_subordinator(const JumpPath& path, double ell);

// The shifted path tau'_u = tau_{ell+u} - tau_ell on [0, horizon - ell].
JumpPath restart_increment(const JumpPath& path, double ell);

// Multiplies all jump sizes, the cutoff and the drift by `factor` (> 0);
// rescales the Levy tail coefficient by factor^alpha.
JumpPath scale_jump_sizes(const JumpPath& path, double factor);

}  // namespace tcir
