#pragma once

#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tcir/processes.hpp"
#include "tcir/subordinators.hpp"

namespace tcir {

// One subordinator jump together with the increments it induces in the
// time-changed processes.  Fields the producing routine does not compute stay NaN.
struct JumpDelta {
    double s = 0.0;          // subordinator time of the jump
    double tau_minus = 0.0;  // left limit of tau at s
    double tau_plus = 0.0;
    double delta_tau = 0.0;

    // Lebesgue case: delta_y = int_{tau-}^{tau+} X_u du, with the integrand
    // extrema over the nodes used (the computable stand-in for the local
    // oscillation of X around X_0).
    double delta_y = std::numeric_limits<double>::quiet_NaN();
    double x_min = std::numeric_limits<double>::quiet_NaN();
    double x_max = std::numeric_limits<double>::quiet_NaN();

    // Stochastic case: delta_i = int X dB over the jump interval and its
    // three-term split  delta_i = X_0 dB + (X_{tau-} - X_0) dB + residual.
    double delta_i = std::numeric_limits<double>::quiet_NaN();
    double delta_b = std::numeric_limits<double>::quiet_NaN();
    double term_x0 = std::numeric_limits<double>::quiet_NaN();
    double term_level = std::numeric_limits<double>::quiet_NaN();
    double term_residual = std::numeric_limits<double>::quiet_NaN();
};

struct QuadratureOptions {
    int initial_nodes = 64;
    double rel_tol = 1e-8;
    // Doubling stops here even if rel_tol is not met; rough integrands
    // (Brownian X) never settle to a fixed tolerance.
    int max_nodes = 1 << 14;
};

struct ItoOptions {
    double em_step = 1e-3;
    int min_steps = 4;  // set to 1 for constant integrands (single step is exact)
    long long max_steps = 1 << 22;
};

// X-hat on the grid: X evaluated at tau_ell, right-continuous in ell.
SampledPath subordinate(ProcessEvaluator& x, const JumpPath& path,
                        std::span<const double> grid);

// Streaming enumeration of the jumps of tau with time <= eps, in time order.
// delta_y via the evaluator's own integral when available, otherwise trapezoid
// with node doubling.
void for_each_jump_delta_y(ProcessEvaluator& x, const JumpPath& path, double eps,
                           const QuadratureOptions& quad,
                           const std::function<void(const JumpDelta&)>& fn);
std::vector<JumpDelta> jump_deltas_Y(ProcessEvaluator& x, const JumpPath& path,
                                     double eps, const QuadratureOptions& quad = {});

// Euler-Maruyama integral of X against a Brownian motion generated forward
// inside each jump interval only; delta_b is the Brownian increment across the
// interval.  X must be driven by a stream independent of `rng`.
void for_each_jump_delta_i(ProcessEvaluator& x, const JumpPath& path, double eps,
                           const ItoOptions& ito, std::mt19937_64& rng,
                           const std::function<void(const JumpDelta&)>& fn);
std::vector<JumpDelta> jump_deltas_I(ProcessEvaluator& x, const JumpPath& path,
                                     double eps, const ItoOptions& ito,
                                     std::mt19937_64& rng);

}  // namespace tcir
