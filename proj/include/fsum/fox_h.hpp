#pragma once

#include "fsum/special_functions.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fsum {

// Outer coefficient row (a_j; alpha_j^(1..r)) or (b_j; beta_j^(1..r)).
struct CoefRow {
    double value = 0.0;
    std::vector<double> coeffs;
};

// Inner entry (c_j, gamma_j) or (d_j, delta_j) of one dimension.
struct InnerEntry {
    double value = 0.0;
    double coeff = 1.0;
};

struct InnerGroup {
    std::vector<InnerEntry> c;
    std::size_t n = 0; // c_1..c_n enter as Gamma(1 - c + gamma zeta), the rest as 1/Gamma(c - gamma zeta)
    std::vector<InnerEntry> d;
    std::size_t m = 0; // d_1..d_m enter as Gamma(d - delta zeta), the rest as 1/Gamma(1 - d + delta zeta)
};

// Multivariate Fox H-function
//   H = (2 pi i)^-r \int Psi(zeta) prod_i phi_i(zeta_i) z_i^{zeta_i} dzeta
// with Psi built from the outer rows and phi_i from inner[i].
struct FoxHSpec {
    std::vector<CoefRow> a;
    std::size_t n = 0; // a_1..a_n numerator Gamma(1 - a + alpha.zeta), rest denominator Gamma(a - alpha.zeta)
    std::vector<CoefRow> b; // denominator Gamma(1 - b + beta.zeta)
    std::vector<InnerGroup> inner;
    std::vector<double> args; // positive reals

    std::size_t dims() const { return args.size(); }
    void validate() const;
};

// coeffs . sigma < bound (upper) or coeffs . sigma > bound (lower)
struct LinearConstraint {
    std::vector<double> coeffs;
    double bound = 0.0;
    bool upper = true;
    std::string label;

    double slack(const std::vector<double>& sigma) const;
};

struct ContourPlan {
    std::vector<double> anchors;     // sigma_l
    std::vector<double> half_widths; // T_l
    std::vector<int> nodes;          // N_l, odd
    std::vector<LinearConstraint> constraints;

    double step(std::size_t l) const { return 2.0 * half_widths[l] / (nodes[l] - 1); }
    double total_nodes() const;
    std::string describe() const;
};

// midpoint: centre of the admissible box; balanced: widest trapezoid step;
// magnitude: smallest |integrand| on the real section, which limits cancellation
enum class Placement { midpoint, balanced, magnitude };

struct PlanOptions {
    Placement placement = Placement::balanced;
    double tolerance = 0.0; // 0 selects default_tolerance(dims)
    int min_nodes = 201;
    double node_budget = 4e8;
    double margin = 0.1;
    double decay = 1e-12;
    bool allow_high_dims = false;
};

struct EvalOptions {
    double tolerance = 0.0; // relative; 0 selects default_tolerance(dims)
    bool check_tolerance = true;
    bool allow_high_dims = false;
    bool use_lattice = true;
    unsigned threads = 0; // 0 selects default_thread_count()
};

struct EvalResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long long nodes_used = 0;
    double imag_part = 0.0;
    double abs_mass = 0.0; // trapezoid sum of |integrand|, a cancellation gauge
};

double default_tolerance(std::size_t dims);

// Pole-separation constraints implied by the numerator gammas of spec.
std::vector<LinearConstraint> pole_constraints(const FoxHSpec& spec);

ContourPlan plan_contours(const FoxHSpec& spec, const std::vector<LinearConstraint>& extra = {},
                          const PlanOptions& opts = {});

EvalResult fox_h(const FoxHSpec& spec, const ContourPlan& plan, const EvalOptions& opts = {});

// Plan, evaluate, and halve the step (at most twice) while the estimate misses the tolerance.
// A balanced plan whose result only clears the cancellation floor is retried at the
// magnitude placement and the tighter of the two results is kept.
EvalResult fox_h_auto(const FoxHSpec& spec, const std::vector<LinearConstraint>& extra = {},
                      const PlanOptions& plan_opts = {}, const EvalOptions& eval_opts = {},
                      ContourPlan* used_plan = nullptr);

// log of the integrand Psi * prod phi_i * z^zeta at one point.
cplx fox_h_log_integrand(const FoxHSpec& spec, const std::vector<cplx>& zeta);

} // namespace fsum
