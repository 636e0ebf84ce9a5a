#pragma once

#include "fsum/fading.hpp"
#include "fsum/sample_set.hpp"

#include <functional>
#include <vector>

namespace fsum {

// Normalized moment ratios of the sum: H = E[Z^2]/E[Z]^2, Y = E[Z^3]/(E[Z] E[Z^2]).
struct MomentSummary {
    double H = 1.0;
    double Y = 1.0;
    double mean = 1.0;
};

struct KSReport {
    double statistic = 0.0;
    double critical = 0.0;
    std::size_t count = 0;
    double alpha = 0.05;
    bool pass = false;
};

using CdfFunction = std::function<double(double)>;

// Adjusted moment summary of a branch sum; eps holds one factor per branch.
MomentSummary summarize_moments(const BranchSet& b, const std::vector<double>& eps);
// Single F with the given summary (shape parameters from H and Y, mean carried over).
FadingParams params_from_summary(const MomentSummary& s);

FadingParams match_moments(const BranchSet& b, const std::vector<double>& eps);
FadingParams match_moments(const BranchSet& b, double eps = 0.0);
FadingParams match_moments_iid(const FadingParams& p, std::size_t count, double eps = 0.0);

// E[Z^k] for k = 0..order from the per-branch moments.
std::vector<double> sum_raw_moments(const BranchSet& b, int order);

double ks_statistic(const CdfFunction& cdf, const SampleSet& sample);
double ks_critical(std::size_t v, double alpha);
KSReport ks_test(const CdfFunction& cdf, const SampleSet& sample, double alpha = 0.05);

// Negative factors are allowed: for the usual parameter range the best fit sits slightly below 0.
struct EpsilonGrid {
    double start = -0.5;
    double stop = 0.5;
    double step = 0.005;
};

struct EpsilonFit {
    double epsilon = 0.0;
    FadingParams params;
    // statistic = Kolmogorov distance to the reference on the z-grid; critical for report_count draws
    KSReport report;
    std::size_t skipped = 0; // grid points with invalid matched parameters
};

struct EpsilonOptions {
    EpsilonGrid grid;
    std::size_t z_points = 400;
    double tail = 1e-4;             // quantile span [tail, 1 - tail] of the reference
    std::size_t report_count = 10000;
    double alpha = 0.05;
};

EpsilonFit optimize_epsilon(const BranchSet& b, const CdfFunction& reference_cdf, const EpsilonOptions& opts = {});

// Quantile of a continuous CDF by bisection in log z.
double cdf_quantile(const CdfFunction& cdf, double p, double hint = 1.0);

} // namespace fsum
