#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tcir::stats {

// Outcome of a one-sided test at a declared significance level.
// Convention everywhere: pass <=> statistic <= threshold.
struct TestReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    double level = 0.0;
    bool pass = false;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

// Asymptotic two-sample KS critical coefficient c(level) = sqrt(-ln(level/2)/2),
// c(0.01) ~ 1.628.  Valid for the sample sizes used here (>= ~1e3 per side).
double ks_critical_coefficient(double level);

// Two-sample Kolmogorov-Smirnov: statistic sup|F_a - F_b| against the
// asymptotic threshold c(level) * sqrt((n_a + n_b) / (n_a * n_b)).
TestReport ks_two_sample(std::span<const double> a, std::span<const double> b,
                         double level);

// Pearson chi-square goodness of fit of integer counts against Poisson(lambda),
// with tail cells pooled so every expected count is >= 5.
TestReport chi_square_poisson_gof(std::span<const long long> counts, double lambda,
                                  double level);

// Right-continuous empirical CDF.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);
    double operator()(double x) const;
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

// Linear-interpolation quantile (the numpy default convention).
double quantile(std::vector<double> samples, double p);
std::vector<double> quantiles(std::vector<double> samples, std::span<const double> probs);

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);
// Standard error of the sample mean.
double standard_error(std::span<const double> xs);

double chi_square_quantile(double p, double dof);
double normal_quantile(double p);
double poisson_cdf(long long k, double lambda);

}  // namespace tcir::stats
