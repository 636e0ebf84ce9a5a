#pragma once

#include "fsum/fading.hpp"
#include "fsum/fox_h.hpp"

namespace fsum {

struct SumEval {
    double value = 0.0;
    double abs_error = 0.0;
    long long nodes = 0;
    ContourPlan plan;
};

// Inner gamma group Gamma(zeta) Gamma(ms + zeta) Gamma(m - zeta) of one branch.
InnerGroup branch_group(const FadingParams& p);
// sum_l [ln Gamma(m_l) + ln Gamma(ms_l)]
double log_branch_norm(const BranchSet& b);

FoxHSpec sum_pdf_spec(const BranchSet& b, double z);
FoxHSpec sum_cdf_spec(const BranchSet& b, double z);

// tol is relative; 0 selects the dimension default
SumEval sum_pdf_eval(const BranchSet& b, double z, double tol = 0.0);
SumEval sum_cdf_eval(const BranchSet& b, double z, double tol = 0.0);
double sum_pdf(const BranchSet& b, double z, double tol = 0.0);
double sum_cdf(const BranchSet& b, double z, double tol = 0.0);

// Leading residue at high SNR.
double sum_cdf_asymptotic(const BranchSet& b, double z);

struct LaplaceOptions {
    double a = 18.4;   // damping; discretization error about exp(-a)
    int terms = 40;    // plain terms before Euler averaging
    int euler = 24;    // binomial averaging order
};

// Euler-accelerated Bromwich inversion of prod_l mgf_l(s) (pdf) or prod_l mgf_l(s)/s (cdf).
// With tol > 0 a second pass at a larger damping checks agreement to tol relative.
double laplace_inversion_pdf(const BranchSet& b, double z, double tol = 0.0, const LaplaceOptions& opts = {});
double laplace_inversion_cdf(const BranchSet& b, double z, double tol = 0.0, const LaplaceOptions& opts = {});

} // namespace fsum
