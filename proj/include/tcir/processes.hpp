#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcir {

// Raised when a grid-backed process is evaluated beyond its simulated horizon.
class horizon_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A continuous-time process observed on a deterministic grid.
struct SampledPath {
    enum class Interp { left_constant, linear };

    std::vector<double> times;   // strictly increasing, times[0] = 0
    std::vector<double> values;  // one per grid point
    Interp interp = Interp::linear;

    double horizon() const { return times.back(); }
    double value_at(double t) const;
};

std::vector<double> uniform_grid(double horizon, double dt);
// Uniform spacing dt up to t = 1, then relative spacing dt (t_{k+1} = t_k (1+dt)).
// Keeps heavy-tailed horizons tractable at fixed relative resolution.
std::vector<double> stretched_grid(double horizon, double dt);

// 2-D Bessel process from 1 as the norm of planar Brownian motion started at
// (1, 0); exact in law at the grid points.
SampledPath simulate_bessel2_on_grid(std::vector<double> grid, std::mt19937_64& rng);
SampledPath simulate_bessel2(double horizon, double dt, std::mt19937_64& rng);

// H_t = int_0^t R_s^{-2} ds by trapezoid on R's grid.
SampledPath bessel_clock(const SampledPath& bessel);

struct BesselWithClock {
    SampledPath bessel;  // R on the base grid
    SampledPath clock;   // H on the same grid
};

// Joint simulation of R and its clock.  With refine_tol > 0, any segment
// longer than refine_tol * min(R^2 at its ends) is bisected with
// Brownian-bridge midpoints before the trapezoid is applied.  The near-zero
// dips of R carry the heavy upper tail of the clock at time scales ~ depth^2,
// far below any fixed grid, so the refinement follows each dip down until it
// is resolved; refine_tol <= 0 reproduces the plain grid trapezoid.
BesselWithClock simulate_bessel2_with_clock(std::vector<double> grid, double refine_tol,
                                            std::mt19937_64& rng);

// Y_u = int_0^u X_s ds by trapezoid on X's grid.
SampledPath integral_process(const SampledPath& x);

// ---------------------------------------------------------------------------
// Test integrands
// ---------------------------------------------------------------------------

struct ProcessSpec {
    enum class Kind { constant, affine, brownian, hoelder_test, bessel_clock_integrand };

    Kind kind = Kind::constant;
    double x0 = 0.0;
    double slope = 0.0;
    double eta = 1.0;

    // Formats: "constant:<x0>", "affine:<x0>:<slope>", "brownian:<x0>",
    // "hoelder:<x0>:<eta>", "bessel-r2".
    static ProcessSpec parse(const std::string& text);
    std::string to_string() const;

    bool x0_known() const { return kind != Kind::brownian; }
    // X_0 (for bessel_clock_integrand, R_0 = 1 gives X_0 = 1).
    double initial_value() const;
};

struct IntegralEstimate {
    double value = 0.0;
    double x_min = 0.0;  // extrema of the integrand over the nodes used
    double x_max = 0.0;
};

// Uniform accessor for the integrands fed to the time-change layer.  Stateful
// kinds (Brownian) reveal values lazily and stay consistent across queries.
class ProcessEvaluator {
  public:
    virtual ~ProcessEvaluator() = default;
    virtual double value_at(double t) = 0;
    virtual double initial_value() { return value_at(0.0); }
    // Trapezoid on two nodes is already exact (degree <= 1 integrands).
    virtual bool trapezoid_exact() const { return false; }
    // Closed-form or grid-resolved integral over [start, start + length], when
    // available.  The length is passed explicitly: jump lengths can sit near
    // the ulp of their left endpoint, where (start + length) - start would
    // destroy them.
    virtual std::optional<IntegralEstimate> integrate(double start, double length) {
        (void)start;
        (void)length;
        return std::nullopt;
    }
};

std::unique_ptr<ProcessEvaluator> make_constant(double x0);
std::unique_ptr<ProcessEvaluator> make_affine(double x0, double slope);
// x0 + sgn(sin t) |sin t|^eta; Lipschitz for eta = 1, Hoelder-eta at the zeros
// of sin for eta < 1.
std::unique_ptr<ProcessEvaluator> make_hoelder_test(double x0, double eta);
// x0 + W_t with lazy forward generation and Brownian-bridge refinement.
std::unique_ptr<ProcessEvaluator> make_brownian(double x0, std::mt19937_64 rng);
// R^{-2} read off a simulated Bessel path (linear interpolation of R).  With
// clamp_beyond_horizon the last value is frozen past the horizon instead of
// throwing; callers track the truncation frequency.
std::unique_ptr<ProcessEvaluator> make_bessel_clock_integrand(SampledPath bessel,
                                                              bool clamp_beyond_horizon);

// First time u with sup_{v<u} (u-v)^{-eta} |X_u - X_v|^2 > 1 for the
// hoelder_test shape (x0-independent), scanned on a grid; +inf if no breach.
double hoelder_breach_time(double eta, double scan_horizon);

}  // namespace tcir
