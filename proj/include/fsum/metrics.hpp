#pragma once

#include "fsum/fading.hpp"
#include "fsum/fox_h.hpp"
#include "fsum/result.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace fsum {

struct MetricRequest {
    BranchSet branches;
    std::optional<Method> method; // unset: the per-metric default path
    double threshold = 1.0;       // outage threshold (linear)
    double delay_exponent = 1.0;  // A
    double cutoff = 1.0;          // TIFR z0 (linear)
    double s_reg = 1e-6;          // final-value regularization
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 1;
    double epsilon = 0.0;         // single-F adjustment factor
    double tolerance = 0.0;       // Fox H relative tolerance; 0 selects the default
    bool fallback = true;         // exact path drops to single_f when infeasible or refused
                                  // (ec continues to oracle when no single F matches)
};

// ORA and OPRA default to single_f (their exact paths need L + 1 dimensions).
// Method::oracle works from the product of branch MGFs: Bromwich inversion for op, half-line
// integrals for ec, cifr and ora.
Method default_method(MetricKind kind);

MetricResult outage_probability(const MetricRequest& req);
MetricResult effective_capacity(const MetricRequest& req);
MetricResult capacity_cifr(const MetricRequest& req);
MetricResult capacity_tifr(const MetricRequest& req);
MetricResult capacity_ora(const MetricRequest& req);
MetricResult capacity_opra(const MetricRequest& req);
MetricResult evaluate_metric(MetricKind kind, const MetricRequest& req);

double capacity_awgn(double total_snr);

struct Gamma0Result {
    double gamma0 = 1.0;
    double residual = 0.0;
    int iterations = 0;
    Method method = Method::exact_h;
};

// Bisection on (1e-9, 1], widened once to [1e-12, 2] when the ends share a sign.
Gamma0Result solve_gamma0(const std::function<double(double)>& residual, double tol = 1e-6);
// Residual assembled on the request's path (exact_h, single_f or monte_carlo).
Gamma0Result solve_gamma0(const MetricRequest& req, double tol = 1e-6);
// (1/g)(1 - F(g)) - E[1{Z >= g}/Z] - 1 on the request's path
double gamma0_residual(const MetricRequest& req, double g);

// Fox H specs behind the exact capacity paths
FoxHSpec effective_capacity_spec(const BranchSet& b, double a);
FoxHSpec cifr_spec(const BranchSet& b, double s);
FoxHSpec tifr_spec(const BranchSet& b, double z0);
FoxHSpec ora_spec(const BranchSet& b, double s);
FoxHSpec opra_spec(const BranchSet& b, double gamma0, double s);

// Matched single F used by the single_f path (the branch itself when L = 1).
FadingParams single_f_params(const BranchSet& b, double eps);

// E[g(Z) 1{Z >= lower}] for Z following one F law, by tanh-sinh quadrature on the beta scale.
double f_expectation(const FadingParams& p, const std::function<double(double)>& g, double lower = 0.0);

} // namespace fsum
