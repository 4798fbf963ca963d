#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tcir {

// Density of the law of (x gamma_s, s <= t) w.r.t. the gamma process law:
// x^{-t} exp((1 - 1/x) gamma_t), evaluated in log space.
double rn_density(double x, double t, double gamma_t);

struct ChangeOfMeasureReport {
    double x = 1.0;
    double t = 1.0;
    long long replicates = 0;

    double mean_weight = 0.0;  // should be 1
    double mean_weight_se = 0.0;

    // Reweighted first and second moments of gamma_{t/2} against the moments
    // of x * gamma_{t/2}.
    double weighted_mean = 0.0;
    double weighted_mean_se = 0.0;
    double weighted_mean_target = 0.0;
    double weighted_second = 0.0;
    double weighted_second_se = 0.0;
    double weighted_second_target = 0.0;

    bool pass = false;  // all three within 3 standard errors
};

ChangeOfMeasureReport verify_change_of_measure(double x, double t, long long replicates,
                                               std::mt19937_64& rng);

struct ScheffePoint {
    double t = 0.0;
    double gap = 0.0;  // E|density - 1|, the L1 distance to the limit weight
    double se = 0.0;
};

struct ScheffeSeries {
    std::vector<ScheffePoint> points;       // in the order of the given schedule
    std::vector<double> decrease_z;         // z-score of gap(t_k) - gap(t_{k+1})
    bool strictly_decreasing_3sigma = false;
};

// L1 gap E|rn_density(x, t, gamma_t) - 1| along a decreasing t-schedule, with
// one gamma path shared across schedule points (common random numbers).
ScheffeSeries scheffe_gap(double x, std::span<const double> t_schedule,
                          long long replicates, std::mt19937_64& rng);

struct ContrastReport {
    double alpha = 0.5;
    double eps = 0.0;
    double m = 0.0;
    double x1 = 1.0, x2 = 1.0;

    double lambda1 = 0.0, lambda2 = 0.0;  // stable Poisson count parameters
    double accuracy = 0.0;                // empirical likelihood-ratio accuracy
    double bayes_accuracy = 0.0;          // exact two-Poisson oracle

    double gamma_lambda1 = 0.0, gamma_lambda2 = 0.0;
    double gamma_accuracy = 0.0;  // same protocol against gamma scaling
};

// Distinguishing x1 tau from x2 tau by the count of early jumps above eps^m:
// the scaled-stable Poisson parameters separate as eps -> 0, the gamma ones
// differ only logarithmically and classification degrades to chance.
ContrastReport stable_contrast(double x1, double x2, double eps, double m,
                               double alpha, long long replicates,
                               std::uint64_t seed);

}  // namespace tcir
