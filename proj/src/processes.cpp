#include "tcir/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tcir {

double SampledPath::value_at(double t) const {
    if (times.empty()) throw std::invalid_argument("SampledPath: empty grid");
    if (t < times.front() || t > times.back())
        throw horizon_error("SampledPath: evaluation outside [0, horizon]");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    if (hi == 0) return values.front();
    if (hi == times.size()) return values.back();
    const std::size_t lo = hi - 1;
    if (interp == Interp::left_constant) return values[lo];
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * values[lo] + w * values[hi];
}

std::vector<double> uniform_grid(double horizon, double dt) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(dt > 0.0 && dt <= horizon))
        throw std::invalid_argument("dt must satisfy 0 < dt <= horizon");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(horizon / dt) + 2);
    g.push_back(0.0);
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t >= horizon - 0.5 * dt) break;
        g.push_back(t);
    }
    g.push_back(horizon);
    return g;
}

std::vector<double> stretched_grid(double horizon, double dt) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    std::vector<double> g;
    g.push_back(0.0);
    double t = 0.0;
    while (true) {
        const double step = dt * std::max(1.0, t);
        if (t + step >= horizon - 0.5 * step) break;
        t += step;
        g.push_back(t);
    }
    g.push_back(horizon);
    return g;
}

SampledPath simulate_bessel2_on_grid(std::vector<double> grid, std::mt19937_64& rng) {
    if (grid.empty() || grid.front() != 0.0)
        throw std::invalid_argument("grid must start at 0");
    std::normal_distribution<double> gauss(0.0, 1.0);
    SampledPath p;
    p.interp = SampledPath::Interp::linear;
    p.values.resize(grid.size());
    double w1 = 0.0, w2 = 0.0;
    p.values[0] = 1.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double h = grid[k] - grid[k - 1];
        if (!(h > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
        const double s = std::sqrt(h);
        w1 += s * gauss(rng);
        w2 += s * gauss(rng);
        p.values[k] = std::hypot(1.0 + w1, w2);
    }
    p.times = std::move(grid);
    return p;
}

SampledPath simulate_bessel2(double horizon, double dt, std::mt19937_64& rng) {
    return simulate_bessel2_on_grid(uniform_grid(horizon, dt), rng);
}

SampledPath bessel_clock(const SampledPath& bessel) {
    SampledPath h;
    h.times = bessel.times;
    h.interp = SampledPath::Interp::linear;
    h.values.resize(bessel.values.size());
    h.values[0] = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < bessel.values.size(); ++k) {
        const double r = bessel.values[k];
        if (!(r > 0.0))
            throw std::domain_error("bessel_clock: nonpositive Bessel value");
        const double f = 1.0 / (r * r);
        if (k > 0) {
            h.values[k] =
                h.values[k - 1] + 0.5 * (bessel.times[k] - bessel.times[k - 1]) * (prev + f);
        }
        prev = f;
    }
    return h;
}

namespace {

// Clock increment over [t0, t1] given the planar-Brownian states at the ends.
// Bisects with bridge midpoints until the segment is short relative to the
// squared distance from the origin, then applies the trapezoid.
double refined_clock_increment(double t0, double u0, double v0, double t1, double u1,
                               double v1, double tol, int depth,
                               std::normal_distribution<double>& gauss,
                               std::mt19937_64& rng) {
    const double ra2 = u0 * u0 + v0 * v0;
    const double rb2 = u1 * u1 + v1 * v1;
    const double len = t1 - t0;
    if (len <= tol * std::min(ra2, rb2) || depth >= 48)
        return 0.5 * len * (1.0 / ra2 + 1.0 / rb2);
    const double tm = 0.5 * (t0 + t1);
    const double sd = 0.5 * std::sqrt(len);  // bridge midpoint deviation
    const double um = 0.5 * (u0 + u1) + sd * gauss(rng);
    const double vm = 0.5 * (v0 + v1) + sd * gauss(rng);
    return refined_clock_increment(t0, u0, v0, tm, um, vm, tol, depth + 1, gauss, rng) +
           refined_clock_increment(tm, um, vm, t1, u1, v1, tol, depth + 1, gauss, rng);
}

}  // namespace

BesselWithClock simulate_bessel2_with_clock(std::vector<double> grid, double refine_tol,
                                            std::mt19937_64& rng) {
    if (grid.empty() || grid.front() != 0.0)
        throw std::invalid_argument("grid must start at 0");
    std::normal_distribution<double> gauss(0.0, 1.0);

    BesselWithClock out;
    out.bessel.interp = SampledPath::Interp::linear;
    out.clock.interp = SampledPath::Interp::linear;
    out.bessel.values.resize(grid.size());
    out.clock.values.resize(grid.size());

    double u = 1.0, v = 0.0;  // planar coordinates, started at (1, 0)
    out.bessel.values[0] = 1.0;
    out.clock.values[0] = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double h = grid[k] - grid[k - 1];
        if (!(h > 0.0)) throw std::invalid_argument("grid must be strictly increasing");
        const double s = std::sqrt(h);
        const double u_next = u + s * gauss(rng);
        const double v_next = v + s * gauss(rng);
        double inc;
        if (refine_tol > 0.0) {
            inc = refined_clock_increment(grid[k - 1], u, v, grid[k], u_next, v_next,
                                          refine_tol, 0, gauss, rng);
        } else {
            inc = 0.5 * h * (1.0 / (u * u + v * v) + 1.0 / (u_next * u_next + v_next * v_next));
        }
        u = u_next;
        v = v_next;
        out.bessel.values[k] = std::hypot(u, v);
        out.clock.values[k] = out.clock.values[k - 1] + inc;
    }
    out.bessel.times = grid;
    out.clock.times = std::move(grid);
    return out;
}

SampledPath integral_process(const SampledPath& x) {
    SampledPath y;
    y.times = x.times;
    y.interp = SampledPath::Interp::linear;
    y.values.resize(x.values.size());
    y.values[0] = 0.0;
    for (std::size_t k = 1; k < x.values.size(); ++k) {
        y.values[k] = y.values[k - 1] + 0.5 * (x.times[k] - x.times[k - 1]) *
                                            (x.values[k - 1] + x.values[k]);
    }
    return y;
}

// ---------------------------------------------------------------------------
// ProcessSpec
// ---------------------------------------------------------------------------

ProcessSpec ProcessSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty process spec");

    auto num = [&](std::size_t i) {
        if (i >= parts.size())
            throw std::invalid_argument("process spec missing parameter: " + text);
        return std::stod(parts[i]);
    };

    ProcessSpec s;
    if (parts[0] == "constant") {
        s.kind = Kind::constant;
        s.x0 = num(1);
    } else if (parts[0] == "affine") {
        s.kind = Kind::affine;
        s.x0 = num(1);
        s.slope = num(2);
    } else if (parts[0] == "brownian") {
        s.kind = Kind::brownian;
        s.x0 = num(1);
    } else if (parts[0] == "hoelder") {
        s.kind = Kind::hoelder_test;
        s.x0 = num(1);
        s.eta = parts.size() > 2 ? num(2) : 1.0;
        if (!(s.eta > 0.0 && s.eta <= 1.0))
            throw std::invalid_argument("hoelder exponent must lie in (0,1]");
    } else if (parts[0] == "bessel-r2") {
        s.kind = Kind::bessel_clock_integrand;
    } else {
        throw std::invalid_argument("unknown process kind: " + parts[0]);
    }
    return s;
}

std::string ProcessSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::constant: os << "constant:" << x0; break;
        case Kind::affine: os << "affine:" << x0 << ":" << slope; break;
        case Kind::brownian: os << "brownian:" << x0; break;
        case Kind::hoelder_test: os << "hoelder:" << x0 << ":" << eta; break;
        case Kind::bessel_clock_integrand: os << "bessel-r2"; break;
    }
    return os.str();
}

double ProcessSpec::initial_value() const {
    if (kind == Kind::bessel_clock_integrand) return 1.0;
    return x0;
}

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

namespace {

class ConstantProcess final : public ProcessEvaluator {
  public:
    explicit ConstantProcess(double x0) : x0_(x0) {}
    double value_at(double) override { return x0_; }
    bool trapezoid_exact() const override { return true; }
    std::optional<IntegralEstimate> integrate(double, double length) override {
        return IntegralEstimate{x0_ * length, x0_, x0_};
    }

  private:
    double x0_;
};

class AffineProcess final : public ProcessEvaluator {
  public:
    AffineProcess(double x0, double slope) : x0_(x0), slope_(slope) {}
    double value_at(double t) override { return x0_ + slope_ * t; }
    bool trapezoid_exact() const override { return true; }
    std::optional<IntegralEstimate> integrate(double start, double length) override {
        const double va = x0_ + slope_ * start;
        const double vb = x0_ + slope_ * (start + length);
        return IntegralEstimate{(x0_ + slope_ * (start + 0.5 * length)) * length,
                                std::min(va, vb), std::max(va, vb)};
    }

  private:
    double x0_, slope_;
};

class HoelderTestProcess final : public ProcessEvaluator {
  public:
    HoelderTestProcess(double x0, double eta) : x0_(x0), eta_(eta) {
        if (!(eta > 0.0 && eta <= 1.0))
            throw std::invalid_argument("hoelder exponent must lie in (0,1]");
    }
    double value_at(double t) override {
        const double s = std::sin(t);
        const double mag = eta_ == 1.0 ? std::abs(s) : std::pow(std::abs(s), eta_);
        return x0_ + std::copysign(mag, s);
    }

  private:
    double x0_, eta_;
};

class BrownianProcess final : public ProcessEvaluator {
  public:
    BrownianProcess(double x0, std::mt19937_64 rng) : x0_(x0), rng_(std::move(rng)) {
        revealed_[0.0] = 0.0;
    }

    double value_at(double t) override {
        if (t < 0.0) throw std::invalid_argument("brownian process: negative time");
        auto it = revealed_.lower_bound(t);
        if (it != revealed_.end() && it->first == t) return x0_ + it->second;
        double w;
        if (it == revealed_.end()) {
            // Forward extension from the last revealed point.
            const auto& [tl, wl] = *revealed_.rbegin();
            w = wl + std::sqrt(t - tl) * gauss_(rng_);
        } else {
            // Bridge between the neighbours: mean linear, variance h_l h_r / (h_l + h_r).
            const auto& [tr, wr] = *it;
            const auto& [tl, wl] = *std::prev(it);
            const double hl = t - tl, hr = tr - t;
            const double mu = wl + hl / (tr - tl) * (wr - wl);
            w = mu + std::sqrt(hl * hr / (tr - tl)) * gauss_(rng_);
        }
        revealed_.emplace(t, w);
        return x0_ + w;
    }

  private:
    double x0_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    std::map<double, double> revealed_;
};

class BesselClockIntegrand final : public ProcessEvaluator {
  public:
    BesselClockIntegrand(SampledPath bessel, bool clamp)
        : bessel_(std::move(bessel)), clamp_(clamp) {}

    double value_at(double t) override {
        double tt = t;
        if (clamp_) tt = std::min(t, bessel_.horizon());
        const double r = bessel_.value_at(tt);
        return 1.0 / (r * r);
    }

    std::optional<IntegralEstimate> integrate(double start, double length) override {
        // Trapezoid over the Bessel grid nodes inside the interval plus its
        // endpoints; resolves long intervals at the grid's own resolution.
        const double b = start + length;
        IntegralEstimate est;
        double t_prev = start;
        double f_prev = value_at(start);
        est.x_min = est.x_max = f_prev;
        est.value = 0.0;
        const auto& ts = bessel_.times;
        auto it = std::upper_bound(ts.begin(), ts.end(), start);
        bool interior = false;
        for (; it != ts.end() && *it < b; ++it) {
            const double f = value_at(*it);
            est.value += 0.5 * (*it - t_prev) * (f_prev + f);
            est.x_min = std::min(est.x_min, f);
            est.x_max = std::max(est.x_max, f);
            t_prev = *it;
            f_prev = f;
            interior = true;
        }
        const double fb = value_at(b);
        const double tail = interior ? b - t_prev : length;
        est.value += 0.5 * tail * (f_prev + fb);
        est.x_min = std::min(est.x_min, fb);
        est.x_max = std::max(est.x_max, fb);
        return est;
    }

  private:
    SampledPath bessel_;
    bool clamp_;
};

}  // namespace

std::unique_ptr<ProcessEvaluator> make_constant(double x0) {
    return std::make_unique<ConstantProcess>(x0);
}
std::unique_ptr<ProcessEvaluator> make_affine(double x0, double slope) {
    return std::make_unique<AffineProcess>(x0, slope);
}
std::unique_ptr<ProcessEvaluator> make_hoelder_test(double x0, double eta) {
    return std::make_unique<HoelderTestProcess>(x0, eta);
}
std::unique_ptr<ProcessEvaluator> make_brownian(double x0, std::mt19937_64 rng) {
    return std::make_unique<BrownianProcess>(x0, std::move(rng));
}
std::unique_ptr<ProcessEvaluator> make_bessel_clock_integrand(SampledPath bessel,
                                                              bool clamp_beyond_horizon) {
    return std::make_unique<BesselClockIntegrand>(std::move(bessel), clamp_beyond_horizon);
}

double hoelder_breach_time(double eta, double scan_horizon) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("hoelder exponent must lie in (0,1]");
    const double h = 5e-3;
    const auto n = static_cast<std::size_t>(scan_horizon / h);
    std::vector<double> x(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = std::sin(static_cast<double>(k) * h);
        x[k] = std::copysign(std::pow(std::abs(s), eta), s);
    }
    for (std::size_t u = 1; u <= n; ++u) {
        const double tu = static_cast<double>(u) * h;
        for (std::size_t v = 0; v < u; ++v) {
            const double d = x[u] - x[v];
            const double gap = tu - static_cast<double>(v) * h;
            if (d * d > std::pow(gap, eta)) return tu;
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace tcir
