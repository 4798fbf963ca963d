#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcir/timechange.hpp"

namespace tcir {

enum class CountSign { positive, negative };

// Exponent applied to the scaled count: 1/alpha for the Lebesgue-integral
// statistic, 1/(2 alpha) for the stochastic-integral one.
enum class ExponentMode { lebesgue, stochastic };

// Number of jumps s <= eps with b * delta_tau_s > eps^m (strict).  Requires
// path.cutoff <= eps^m / b for b > 0, so no countable jump was truncated;
// throws truncation_error otherwise.  Identically 0 for b <= 0.
long long count_N(const JumpPath& path, double b, double eps, double m);

// Strict-threshold count over precomputed jump increments:
//   sign +:   delta_y  > eps^m
//   sign -:  -delta_y  > eps^m
//   squared: |delta_i|^2 > eps^m   (sign ignored)
long long count_J(std::span<const JumpDelta> deltas, double eps, double m,
                  CountSign sign, bool squared);

struct CountRecord {
    double n = 0.0;  // resolution; eps = 1/n
    long long count = 0;
    double scaled = 0.0;  // n^{1 - alpha m} * count
    double m = 0.0;
    double alpha = 0.0;
};

CountRecord make_count_record(double n, long long count, double alpha, double m);

struct EstimatePoint {
    double n = 0.0;
    double j_pos = 0.0;
    double j_neg = 0.0;
    double scaled_pos = 0.0;
    double scaled_neg = 0.0;
    double estimate_pos = 0.0;
    double estimate_neg = 0.0;
};

struct EstimateSeries {
    std::vector<EstimatePoint> points;
    double alpha = 0.0;
    double m = 0.0;
    ExponentMode mode = ExponentMode::lebesgue;
    std::optional<double> target;          // true X_0 when known
    std::optional<double> final_rel_error; // vs |target| at the last point, signed branch
};

struct CountPoint {
    double n = 0.0;
    double j_pos = 0.0;  // real-valued to admit cross-replicate medians
    double j_neg = 0.0;
};

// estimate = scaled^{1/alpha} (lebesgue) or scaled^{1/(2 alpha)} (stochastic),
// with scaled = n^{1 - alpha m} * J.  Requires m > 2/alpha strictly.
EstimateSeries estimate_x0(std::span<const CountPoint> series, double alpha, double m,
                           ExponentMode mode,
                           std::optional<double> target = std::nullopt);

struct KCount {
    long long count = 0;
    bool in_hoelder_regime = true;  // empirical analogue of {tau_eps < T}
};

// Counts jumps s <= eps with |residual stochastic integral|^2 > a * eps^m,
// where the residual integrates X_u - X_{tau_s-} against B over the jump
// interval.  `breach_time` is the first time the integrand leaves its
// certified modulus regime (+inf when it never does).
KCount count_K(ProcessEvaluator& x, const JumpPath& path, double eps, double m,
               double a, const ItoOptions& ito, std::mt19937_64& rng,
               double breach_time);

struct GammaNullResult {
    EstimateSeries series;                      // cross-replicate medians
    std::vector<std::vector<long long>> j_raw;  // per schedule point, per replicate
    std::vector<double> fraction_nonzero;       // P(J >= 1) per schedule point
};

// The retrieval pipeline run against a gamma time change: J counts collapse to
// zero as n grows, so the estimate series converges to 0 regardless of x0.
GammaNullResult gamma_null_retrieve(double x0, std::span<const double> n_schedule,
                                    double alpha, double m, int replicates,
                                    std::uint64_t seed);

}  // namespace tcir
