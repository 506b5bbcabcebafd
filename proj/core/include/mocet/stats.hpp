#pragma once

#include <span>

namespace mocet::stats {

double normal_cdf(double z);
// Upper tail 1 - Phi(z), accurate far into the tail.
double normal_sf(double z);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability P(|T| >= |t|) for Student's t with `df` degrees
// of freedom. df = +inf falls back to the normal distribution.
double student_t_two_sided(double t, double df);

struct Summary {
    double mean = 0.0;
    double variance = 0.0;   // unbiased; 0 for a single value
    double std_error = 0.0;  // sqrt(variance / n)
};

Summary summarize(std::span<const double> values);

struct MannWhitneyResult {
    double u = 0.0;    // U of the first sample: #(x > y) + 0.5 #(x == y)
    double auc = 0.0;  // u / (n_x n_y)
    double z = 0.0;
    double p_value = 1.0;
};

// Two-sided Mann-Whitney U with mid-ranks, tie-corrected variance and a 0.5
// continuity correction (normal approximation).
MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

// Welch's unequal-variance t-test, two-sided.
WelchResult welch_t_test(std::span<const double> x, std::span<const double> y);

}  // namespace mocet::stats
