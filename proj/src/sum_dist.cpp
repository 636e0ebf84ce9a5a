#include "fsum/sum_dist.hpp"

#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fsum {

namespace {

FoxHSpec sum_spec(const BranchSet& b, double z, double b_value) {
    b.validate();
    if (!(z > 0.0) || !std::isfinite(z))
        fail(ErrorCode::domain, "sum distribution needs finite z > 0");
    FoxHSpec spec;
    const std::size_t r = b.size();
    spec.b.push_back({b_value, std::vector<double>(r, 1.0)});
    for (const auto& p : b.branches) {
        spec.inner.push_back(branch_group(p));
        spec.args.push_back(z / p.scale());
    }
    return spec;
}

SumEval evaluate(const FoxHSpec& spec, double tol) {
    PlanOptions po;
    po.tolerance = tol;
    EvalOptions eo;
    eo.tolerance = tol;
    SumEval out;
    const EvalResult r = fox_h_auto(spec, {}, po, eo, &out.plan);
    out.value = r.value;
    out.abs_error = r.abs_error_estimate;
    out.nodes = r.nodes_used;
    return out;
}

template <class F>
double euler_inversion(F&& transform, double t, const LaplaceOptions& o) {
    // Abate-Whitt: trapezoid on Re s = a/(2t) with step pi/t, then binomial averaging of partial sums
    const double a = o.a;
    const double lead = std::exp(a / 2.0) / t;
    std::vector<double> partial;
    partial.reserve(o.terms + o.euler + 1);
    double sum = 0.5 * lead * transform(cplx(a / (2.0 * t), 0.0)).real();
    partial.push_back(sum);
    for (int k = 1; k <= o.terms + o.euler; ++k) {
        const cplx s(a / (2.0 * t), k * std::numbers::pi / t);
        const double term = lead * transform(s).real();
        sum += (k % 2 ? -term : term);
        partial.push_back(sum);
    }
    double out = 0.0;
    double binom = 1.0; // C(euler, k)
    for (int k = 0; k <= o.euler; ++k) {
        out += binom * partial[o.terms + k];
        binom = binom * (o.euler - k) / (k + 1);
    }
    return out * std::pow(2.0, -o.euler);
}

template <class F>
double checked_inversion(F&& transform, double z, double tol, const LaplaceOptions& opts) {
    if (!(z > 0.0) || !std::isfinite(z))
        fail(ErrorCode::domain, "Laplace inversion needs finite z > 0");
    const double v = euler_inversion(transform, z, opts);
    if (tol > 0.0) {
        LaplaceOptions alt = opts;
        alt.a = opts.a + 4.0;
        alt.terms = opts.terms + 10;
        const double w = euler_inversion(transform, z, alt);
        if (std::abs(v - w) > tol * std::abs(v) + 1e-12) {
            std::ostringstream msg;
            msg << "Laplace inversion at z=" << z << " disagrees across damping: " << v << " vs " << w;
            fail(ErrorCode::tolerance_unmet, msg.str());
        }
    }
    return v;
}

cplx mgf_product(const BranchSet& b, cplx s) {
    cplx out = 1.0;
    for (const auto& p : b.branches)
        out *= fisher_f::mgf(p, s);
    return out;
}

} // namespace

InnerGroup branch_group(const FadingParams& p) {
    InnerGroup g;
    g.c = {{1.0, 1.0}, {1.0 - p.ms, 1.0}};
    g.n = 2;
    g.d = {{p.m, 1.0}};
    g.m = 1;
    return g;
}

double log_branch_norm(const BranchSet& b) {
    double s = 0.0;
    for (const auto& p : b.branches)
        s += std::lgamma(p.m) + std::lgamma(p.ms);
    return s;
}

FoxHSpec sum_pdf_spec(const BranchSet& b, double z) { return sum_spec(b, z, 1.0); }

FoxHSpec sum_cdf_spec(const BranchSet& b, double z) { return sum_spec(b, z, 0.0); }

SumEval sum_pdf_eval(const BranchSet& b, double z, double tol) {
    SumEval e = evaluate(sum_pdf_spec(b, z), tol);
    const double scale = std::exp(-log_branch_norm(b)) / z;
    e.value = std::max(0.0, e.value * scale);
    e.abs_error *= scale;
    return e;
}

SumEval sum_cdf_eval(const BranchSet& b, double z, double tol) {
    SumEval e = evaluate(sum_cdf_spec(b, z), tol);
    const double scale = std::exp(-log_branch_norm(b));
    e.value = std::clamp(e.value * scale, 0.0, 1.0);
    e.abs_error *= scale;
    return e;
}

double sum_pdf(const BranchSet& b, double z, double tol) { return sum_pdf_eval(b, z, tol).value; }

double sum_cdf(const BranchSet& b, double z, double tol) { return sum_cdf_eval(b, z, tol).value; }

double sum_cdf_asymptotic(const BranchSet& b, double z) {
    b.validate();
    if (!(z > 0.0))
        fail(ErrorCode::domain, "asymptotic CDF needs z > 0");
    double lg = -std::lgamma(1.0 + b.total_m());
    for (const auto& p : b.branches)
        lg += std::lgamma(p.ms + p.m) - std::lgamma(p.ms) + p.m * std::log(z / p.scale());
    return std::exp(lg);
}

double laplace_inversion_pdf(const BranchSet& b, double z, double tol, const LaplaceOptions& opts) {
    b.validate();
    return checked_inversion([&](cplx s) { return mgf_product(b, s); }, z, tol, opts);
}

double laplace_inversion_cdf(const BranchSet& b, double z, double tol, const LaplaceOptions& opts) {
    b.validate();
    return checked_inversion([&](cplx s) { return mgf_product(b, s) / s; }, z, tol, opts);
}

} // namespace fsum
