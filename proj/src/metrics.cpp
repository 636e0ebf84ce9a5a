#include "fsum/metrics.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/sum_dist.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fsum {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::vector<double> ones(std::size_t n, double v = 1.0) { return std::vector<double>(n, v); }

FoxHSpec branch_spec(const BranchSet& b, double arg_factor) {
    b.validate();
    FoxHSpec s;
    for (const auto& p : b.branches) {
        s.inner.push_back(branch_group(p));
        s.args.push_back(arg_factor / p.scale());
    }
    return s;
}

struct HValue {
    double value = 0.0;
    double abs_error = 0.0;
    long long nodes = 0;
};

HValue eval_h(const FoxHSpec& spec, double tol) {
    PlanOptions po;
    po.tolerance = tol;
    EvalOptions eo;
    eo.tolerance = tol;
    const EvalResult r = fox_h_auto(spec, {}, po, eo);
    return {r.value, r.abs_error_estimate, r.nodes_used};
}

Method resolve(const MetricRequest& req, MetricKind kind) { return req.method.value_or(default_method(kind)); }

bool fallback_worthy(const Error& e) {
    return e.code() == ErrorCode::infeasible_contour || e.code() == ErrorCode::dimension_refused ||
           e.code() == ErrorCode::budget_exceeded;
}

SampleSet draw(const MetricRequest& req) { return sample_sum(req.branches, req.mc_samples, req.seed); }

void note_params(MetricResult& r, const FadingParams& f) {
    r.diagnostics["m_F"] = f.m;
    r.diagnostics["ms_F"] = f.ms;
    r.diagnostics["mean_F"] = f.mean_snr;
}

void require_inverse_moment(const BranchSet& b) {
    if (!(b.total_m() > 1.0)) {
        std::ostringstream msg;
        msg << "E[1/Z] is infinite: sum of m is " << b.total_m() << " (needs > 1)";
        fail(ErrorCode::divergent, msg.str());
    }
}

template <class Exact, class Approx>
MetricResult with_fallback(const MetricRequest& req, MetricKind kind, Exact&& exact, Approx&& approx) {
    try {
        return exact();
    } catch (const Error& e) {
        if (!req.fallback || !fallback_worthy(e))
            throw;
        MetricResult r = approx();
        r.diagnostics["fallback"] = 1.0;
        r.notes.insert(r.notes.begin(), std::string(to_string(kind)) + " exact path unavailable (" + e.what() +
                                            "); used " + to_string(r.method));
        return r;
    }
}

[[noreturn]] void not_defined(MetricKind kind, Method m) {
    fail(ErrorCode::invalid_parameters,
         std::string("method ") + to_string(m) + " is not defined for metric " + to_string(kind));
}

// --- single F pieces ---

MetricResult single_outage(const MetricRequest& req) {
    const FadingParams f = single_f_params(req.branches, req.epsilon);
    MetricResult r;
    r.method = Method::single_f;
    r.value = fisher_f::cdf(f, req.threshold);
    note_params(r, f);
    return r;
}

MetricResult single_effective(const MetricRequest& req) {
    const FadingParams f = single_f_params(req.branches, req.epsilon);
    const double a = req.delay_exponent;
    const double e = f_expectation(f, [a](double z) { return std::exp(-a * std::log1p(z)); });
    MetricResult r;
    r.method = Method::single_f;
    r.value = -std::log2(e) / a;
    note_params(r, f);
    return r;
}

double single_truncated_inverse(const FadingParams& f, double z0) {
    return f_expectation(f, [](double z) { return 1.0 / z; }, z0);
}

MetricResult single_ora(const MetricRequest& req) {
    const FadingParams f = single_f_params(req.branches, req.epsilon);
    MetricResult r;
    r.method = Method::single_f;
    r.value = f_expectation(f, [](double z) { return std::log2(1.0 + z); });
    note_params(r, f);
    return r;
}

// --- MGF oracle: one-dimensional integrals over the product of branch MGFs ---

double log_mgf(const BranchSet& b, double t) {
    if (t * b.total_mean() < 1e-10)
        return -t * b.total_mean();
    double s = 0.0;
    for (const auto& p : b.branches)
        s += std::log(fisher_f::mgf(p, t).real());
    return s;
}

// 1 - M_Z(t) without cancellation for small t
double mgf_deficit(const BranchSet& b, double t) { return -std::expm1(log_mgf(b, t)); }

struct Quad {
    double value = 0.0;
    double error = 0.0;
};

Quad half_line(const std::function<double(double)>& f) {
    static thread_local boost::math::quadrature::exp_sinh<double> integrator;
    Quad q;
    double l1 = 0.0;
    q.value = integrator.integrate(f, 1e-11, &q.error, &l1);
    if (!std::isfinite(q.value) || q.error > 1e-8 * std::max(l1, 1e-300)) {
        std::ostringstream msg;
        msg << "MGF oracle quadrature error " << q.error << " on value " << q.value;
        fail(ErrorCode::no_convergence, msg.str());
    }
    q.error += 64.0 * std::numeric_limits<double>::epsilon() * l1;
    return q;
}

constexpr double kTiny = 1e-250;

// E[ln(1+Z)] = int_0^inf (1 - M(t)) e^{-t} / t dt
MetricResult oracle_ora(const MetricRequest& req) {
    const Quad q = half_line([&](double t) { return t < kTiny ? 0.0 : mgf_deficit(req.branches, t) * std::exp(-t) / t; });
    MetricResult r;
    r.method = Method::oracle;
    r.value = q.value / kLn2;
    r.error_estimate = q.error / kLn2;
    return r;
}

// 1 - E[(1+Z)^{-A}] = (1/Gamma(A)) int_0^inf t^{A-1} e^{-t} (1 - M(t)) dt
MetricResult oracle_effective(const MetricRequest& req) {
    const double a = req.delay_exponent;
    const double lg = std::lgamma(a);
    const Quad q = half_line([&](double t) {
        return t < kTiny ? 0.0 : mgf_deficit(req.branches, t) * std::exp((a - 1.0) * std::log(t) - t - lg);
    });
    MetricResult r;
    r.method = Method::oracle;
    r.value = -std::log1p(-q.value) / (a * kLn2);
    r.error_estimate = q.error / ((1.0 - q.value) * a * kLn2);
    return r;
}

// E[1/Z] = int_0^inf M(t) dt
MetricResult oracle_cifr(const MetricRequest& req) {
    const Quad q = half_line([&](double t) { return t < kTiny ? 1.0 : std::exp(log_mgf(req.branches, t)); });
    MetricResult r;
    r.method = Method::oracle;
    r.value = std::log2(1.0 + 1.0 / q.value);
    r.error_estimate = q.error / (kLn2 * q.value * (q.value + 1.0));
    r.diagnostics["inverse_mean"] = q.value;
    return r;
}

} // namespace

Method default_method(MetricKind kind) {
    switch (kind) {
    case MetricKind::ora:
    case MetricKind::opra: return Method::single_f;
    default: return Method::exact_h;
    }
}

FadingParams single_f_params(const BranchSet& b, double eps) {
    b.validate();
    if (b.size() == 1 && eps == 0.0)
        return b[0];
    return match_moments(b, eps);
}

double f_expectation(const FadingParams& p, const std::function<double(double)>& g, double lower) {
    p.validate();
    // Z = k w/(1-w) with w ~ Beta(m, ms)
    const double k = p.scale();
    const double wlo = lower > 0.0 ? lower / (k + lower) : 0.0;
    const double lnb = std::lgamma(p.m) + std::lgamma(p.ms) - std::lgamma(p.m + p.ms);
    auto f = [&](double w, double wc) {
        const double one_minus = (wc > 0.0) ? wc : 1.0 - w;
        if (w <= 0.0 || one_minus <= 0.0)
            return 0.0;
        const double dens = std::exp((p.m - 1.0) * std::log(w) + (p.ms - 1.0) * std::log(one_minus) - lnb);
        if (dens == 0.0)
            return 0.0;
        return g(k * w / one_minus) * dens;
    };
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double v = 0.0, err = 0.0, l1 = 0.0;
    auto piece = [&](double a, double b) {
        double e = 0.0, l = 0.0;
        // the complement argument equals 1 - w only on pieces that end at 1
        if (b == 1.0)
            v += integrator.integrate(f, a, b, 1e-12, &e, &l);
        else
            v += integrator.integrate([&](double w) { return f(w, -1.0); }, a, b, 1e-12, &e, &l);
        err += e;
        l1 += l;
    };
    // split at the beta mode: a narrow interior peak (large m and ms) defeats a single pass
    const double mode = (p.m > 1.0 && p.ms > 1.0) ? (p.m - 1.0) / (p.m + p.ms - 2.0) : -1.0;
    if (mode > wlo && mode < 1.0) {
        piece(wlo, mode);
        piece(mode, 1.0);
    } else {
        piece(wlo, 1.0);
    }
    if (!std::isfinite(v) || err > 1e-7 * std::max(l1, 1e-300)) {
        std::ostringstream msg;
        msg << "single-F quadrature error " << err << " on value " << v;
        fail(ErrorCode::no_convergence, msg.str());
    }
    return v;
}

FoxHSpec effective_capacity_spec(const BranchSet& b, double a) {
    if (!(a > 0.0))
        fail(ErrorCode::infeasible_contour, "delay exponent A must be positive (A <= 0 leaves no contour)");
    FoxHSpec s = branch_spec(b, 1.0);
    s.a.push_back({1.0 - a, ones(b.size(), -1.0)});
    s.n = 1;
    return s;
}

FoxHSpec cifr_spec(const BranchSet& b, double sreg) {
    FoxHSpec s = branch_spec(b, 1.0 / sreg);
    s.a.push_back({2.0, ones(b.size())});
    s.n = 1;
    s.b.push_back({1.0, ones(b.size())});
    return s;
}

FoxHSpec tifr_spec(const BranchSet& b, double z0) {
    FoxHSpec s = branch_spec(b, z0);
    s.a.push_back({0.0, ones(b.size(), -1.0)});
    s.a.push_back({0.0, ones(b.size(), -1.0)});
    s.n = 1;
    s.b.push_back({-1.0, ones(b.size(), -1.0)});
    return s;
}

FoxHSpec ora_spec(const BranchSet& b, double sreg) {
    FoxHSpec s = branch_spec(b, 1.0);
    const std::size_t r = b.size() + 1;
    s.a = {{0.0, ones(r, -1.0)}, {0.0, ones(r, -1.0)}, {1.0, ones(r)}, {2.0, ones(r)}};
    s.n = 3;
    std::vector<double> brow = ones(r);
    brow.back() = 0.0;
    s.b.push_back({1.0, brow});
    InnerGroup last;
    last.c = {{1.0, 1.0}};
    last.n = 1;
    last.d = {{1.0, 1.0}, {0.0, 1.0}};
    last.m = 1;
    s.inner.push_back(last);
    s.args.push_back(sreg);
    return s;
}

FoxHSpec opra_spec(const BranchSet& b, double gamma0, double sreg) {
    FoxHSpec s = branch_spec(b, gamma0);
    const std::size_t r = b.size() + 1;
    s.a = {{1.0, ones(r, -1.0)}, {1.0, ones(r, -1.0)}, {1.0, ones(r)}, {1.0, ones(r)}};
    s.n = 2;
    std::vector<double> brow = ones(r);
    brow.back() = 0.0;
    s.b.push_back({1.0, brow});
    InnerGroup last;
    last.d = {{0.0, 1.0}};
    last.m = 1;
    s.inner.push_back(last);
    s.args.push_back(sreg);
    return s;
}

double capacity_awgn(double total_snr) {
    if (!(total_snr >= 0.0))
        fail(ErrorCode::domain, "AWGN capacity needs a nonnegative SNR");
    return std::log2(1.0 + total_snr);
}

MetricResult outage_probability(const MetricRequest& req) {
    req.branches.validate();
    if (!(req.threshold > 0.0))
        fail(ErrorCode::domain, "outage threshold must be positive");
    const Method m = resolve(req, MetricKind::outage);
    switch (m) {
    case Method::exact_h:
        return with_fallback(
            req, MetricKind::outage,
            [&] {
                const SumEval e = sum_cdf_eval(req.branches, req.threshold, req.tolerance);
                MetricResult r;
                r.method = m;
                r.value = e.value;
                r.error_estimate = e.abs_error;
                r.diagnostics["nodes"] = static_cast<double>(e.nodes);
                return r;
            },
            [&] { return single_outage(req); });
    case Method::single_f: return single_outage(req);
    case Method::asymptotic: {
        MetricResult r;
        r.method = m;
        r.value = sum_cdf_asymptotic(req.branches, req.threshold);
        return r;
    }
    case Method::monte_carlo: {
        McMetric spec;
        spec.kind = MetricKind::outage;
        spec.threshold = req.threshold;
        return estimate_metric(draw(req), spec);
    }
    case Method::oracle: {
        // the spread between two damping levels stands in for the discretization error
        LaplaceOptions wide;
        wide.a = 24.0;
        MetricResult r;
        r.method = m;
        r.value = laplace_inversion_cdf(req.branches, req.threshold);
        r.error_estimate = std::abs(r.value - laplace_inversion_cdf(req.branches, req.threshold, 0.0, wide));
        return r;
    }
    default: not_defined(MetricKind::outage, m);
    }
}

MetricResult effective_capacity(const MetricRequest& req) {
    req.branches.validate();
    const double a = req.delay_exponent;
    if (!(a > 0.0))
        fail(ErrorCode::domain, "delay exponent A must be positive");
    const Method m = resolve(req, MetricKind::effective_capacity);
    switch (m) {
    case Method::exact_h:
        return with_fallback(
            req, MetricKind::effective_capacity,
            [&] {
                const HValue h = eval_h(effective_capacity_spec(req.branches, a), req.tolerance);
                const double lead = -std::lgamma(a) - log_branch_norm(req.branches);
                const double e = std::exp(lead) * h.value;
                MetricResult r;
                r.method = m;
                r.value = -std::log2(e) / a;
                r.error_estimate = std::exp(lead) * h.abs_error / (a * kLn2 * e);
                r.diagnostics["nodes"] = static_cast<double>(h.nodes);
                return r;
            },
            [&] {
                try {
                    return single_effective(req);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::invalid_parameters && e.code() != ErrorCode::moment_missing)
                        throw;
                    MetricResult r = oracle_effective(req);
                    r.notes.push_back(std::string("no single F available (") + e.what() + "); used oracle");
                    return r;
                }
            });
    case Method::single_f: return single_effective(req);
    case Method::oracle: return oracle_effective(req);
    case Method::monte_carlo: {
        McMetric spec;
        spec.kind = MetricKind::effective_capacity;
        spec.delay_exponent = a;
        return estimate_metric(draw(req), spec);
    }
    default: not_defined(MetricKind::effective_capacity, m);
    }
}

MetricResult capacity_cifr(const MetricRequest& req) {
    req.branches.validate();
    const Method m = resolve(req, MetricKind::cifr);
    auto approx = [&] {
        const FadingParams f = single_f_params(req.branches, req.epsilon);
        if (!(f.m > 1.0)) {
            std::ostringstream msg;
            msg << "E[1/Z] of the matched F is infinite (m_F = " << f.m << ")";
            fail(ErrorCode::divergent, msg.str());
        }
        MetricResult r;
        r.method = Method::single_f;
        r.value = std::log2(1.0 + 1.0 / fisher_f::moment(f, -1.0));
        note_params(r, f);
        return r;
    };
    switch (m) {
    case Method::exact_h:
        require_inverse_moment(req.branches);
        return with_fallback(
            req, MetricKind::cifr,
            [&] {
                const HValue h = eval_h(cifr_spec(req.branches, req.s_reg), req.tolerance);
                const double scale = req.s_reg * std::exp(-log_branch_norm(req.branches));
                const double inv_mean = scale * h.value;
                MetricResult r;
                r.method = m;
                r.value = std::log2(1.0 + 1.0 / inv_mean);
                r.error_estimate = scale * h.abs_error / (kLn2 * inv_mean * (inv_mean + 1.0));
                r.diagnostics["inverse_mean"] = inv_mean;
                r.diagnostics["nodes"] = static_cast<double>(h.nodes);
                return r;
            },
            approx);
    case Method::single_f:
        require_inverse_moment(req.branches);
        return approx();
    case Method::oracle:
        require_inverse_moment(req.branches);
        return oracle_cifr(req);
    case Method::monte_carlo: {
        McMetric spec;
        spec.kind = MetricKind::cifr;
        spec.total_m = req.branches.total_m();
        return estimate_metric(draw(req), spec);
    }
    default: not_defined(MetricKind::cifr, m);
    }
}

MetricResult capacity_tifr(const MetricRequest& req) {
    req.branches.validate();
    const double z0 = req.cutoff;
    if (!(z0 > 0.0))
        fail(ErrorCode::domain, "TIFR cutoff must be positive");
    const Method m = resolve(req, MetricKind::tifr);
    auto approx = [&] {
        const FadingParams f = single_f_params(req.branches, req.epsilon);
        const double inv = single_truncated_inverse(f, z0);
        const double above = 1.0 - fisher_f::cdf(f, z0);
        MetricResult r;
        r.method = Method::single_f;
        r.value = inv > 0.0 ? std::log2(1.0 + 1.0 / inv) * above : 0.0;
        note_params(r, f);
        return r;
    };
    switch (m) {
    case Method::exact_h:
        return with_fallback(
            req, MetricKind::tifr,
            [&] {
                const HValue h = eval_h(tifr_spec(req.branches, z0), req.tolerance);
                const double scale = std::exp(-log_branch_norm(req.branches)) / z0;
                const double inv = scale * h.value;
                const SumEval c = sum_cdf_eval(req.branches, z0, req.tolerance);
                const double above = 1.0 - c.value;
                MetricResult r;
                r.method = m;
                r.value = inv > 0.0 ? std::log2(1.0 + 1.0 / inv) * above : 0.0;
                r.error_estimate = above * scale * h.abs_error / (kLn2 * inv * (inv + 1.0)) +
                                   std::log2(1.0 + 1.0 / inv) * c.abs_error;
                r.diagnostics["truncated_inverse_mean"] = inv;
                r.diagnostics["nodes"] = static_cast<double>(h.nodes + c.nodes);
                return r;
            },
            approx);
    case Method::single_f: return approx();
    case Method::monte_carlo: {
        McMetric spec;
        spec.kind = MetricKind::tifr;
        spec.cutoff = z0;
        return estimate_metric(draw(req), spec);
    }
    default: not_defined(MetricKind::tifr, m);
    }
}

MetricResult capacity_ora(const MetricRequest& req) {
    req.branches.validate();
    const Method m = resolve(req, MetricKind::ora);
    switch (m) {
    case Method::exact_h:
        return with_fallback(
            req, MetricKind::ora,
            [&] {
                const HValue h = eval_h(ora_spec(req.branches, req.s_reg), req.tolerance);
                const double scale = std::exp(-log_branch_norm(req.branches)) / (req.s_reg * kLn2);
                MetricResult r;
                r.method = m;
                r.value = scale * h.value;
                r.error_estimate = scale * h.abs_error;
                r.diagnostics["nodes"] = static_cast<double>(h.nodes);
                return r;
            },
            [&] { return single_ora(req); });
    case Method::single_f: return single_ora(req);
    case Method::oracle: return oracle_ora(req);
    case Method::monte_carlo: {
        McMetric spec;
        spec.kind = MetricKind::ora;
        return estimate_metric(draw(req), spec);
    }
    default: not_defined(MetricKind::ora, m);
    }
}

MetricResult capacity_opra(const MetricRequest& req) {
    req.branches.validate();
    const Method m = resolve(req, MetricKind::opra);
    auto approx = [&] {
        MetricRequest sub = req;
        sub.method = Method::single_f;
        const Gamma0Result g0 = solve_gamma0(sub);
        const FadingParams f = single_f_params(req.branches, req.epsilon);
        const double g = g0.gamma0;
        MetricResult r;
        r.method = Method::single_f;
        r.value = f_expectation(f, [g](double z) { return std::log2(z / g); }, g);
        r.diagnostics["gamma0"] = g;
        r.diagnostics["gamma0_residual"] = g0.residual;
        note_params(r, f);
        return r;
    };
    switch (m) {
    case Method::exact_h:
        return with_fallback(
            req, MetricKind::opra,
            [&] {
                // refuse up front so the cutoff solve is not wasted on a path that cannot finish
                if (req.branches.size() + 1 > 3)
                    fail(ErrorCode::dimension_refused, "OPRA exact path needs L <= 2");
                MetricRequest sub = req;
                sub.method = Method::exact_h;
                const Gamma0Result g0 = solve_gamma0(sub);
                const HValue h = eval_h(opra_spec(req.branches, g0.gamma0, req.s_reg), req.tolerance);
                const double scale = std::exp(-log_branch_norm(req.branches)) / kLn2;
                MetricResult r;
                r.method = m;
                r.value = scale * h.value;
                r.error_estimate = scale * h.abs_error;
                r.diagnostics["gamma0"] = g0.gamma0;
                r.diagnostics["gamma0_residual"] = g0.residual;
                r.diagnostics["nodes"] = static_cast<double>(h.nodes);
                return r;
            },
            approx);
    case Method::single_f: return approx();
    case Method::monte_carlo: {
        const SampleSet s = draw(req);
        const EmpiricalCutoff cut(s);
        const Gamma0Result g0 = solve_gamma0([&](double g) { return cut.residual(g); });
        McMetric spec;
        spec.kind = MetricKind::opra;
        spec.gamma0 = g0.gamma0;
        MetricResult r = estimate_metric(s, spec);
        r.diagnostics["gamma0_residual"] = g0.residual;
        return r;
    }
    default: not_defined(MetricKind::opra, m);
    }
}

MetricResult evaluate_metric(MetricKind kind, const MetricRequest& req) {
    switch (kind) {
    case MetricKind::outage: return outage_probability(req);
    case MetricKind::effective_capacity: return effective_capacity(req);
    case MetricKind::cifr: return capacity_cifr(req);
    case MetricKind::tifr: return capacity_tifr(req);
    case MetricKind::ora: return capacity_ora(req);
    case MetricKind::opra: return capacity_opra(req);
    }
    fail(ErrorCode::invalid_parameters, "unknown metric");
}

Gamma0Result solve_gamma0(const std::function<double(double)>& residual, double tol) {
    double lo = 1e-9, hi = 1.0;
    double rlo = residual(lo), rhi = residual(hi);
    if ((rlo > 0.0) == (rhi > 0.0)) {
        lo = 1e-12;
        hi = 2.0;
        rlo = residual(lo);
        rhi = residual(hi);
        if ((rlo > 0.0) == (rhi > 0.0)) {
            std::ostringstream msg;
            msg << "cutoff residual has one sign on [1e-12, 2]: R(lo)=" << rlo << ", R(hi)=" << rhi;
            fail(ErrorCode::no_sign_change, msg.str());
        }
    }
    Gamma0Result out;
    out.gamma0 = std::abs(rlo) < std::abs(rhi) ? lo : hi;
    out.residual = std::abs(rlo) < std::abs(rhi) ? rlo : rhi;
    for (int it = 1; it <= 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rm = residual(mid);
        out.iterations = it;
        if (std::abs(rm) < std::abs(out.residual)) {
            out.gamma0 = mid;
            out.residual = rm;
        }
        if (std::abs(rm) < tol || hi - lo < 1e-15 * hi)
            break;
        if ((rm > 0.0) == (rlo > 0.0)) {
            lo = mid;
            rlo = rm;
        } else {
            hi = mid;
        }
    }
    return out;
}

double gamma0_residual(const MetricRequest& req, double g) {
    const Method m = req.method.value_or(Method::exact_h);
    switch (m) {
    case Method::exact_h: {
        const double cdf = sum_cdf(req.branches, g, req.tolerance);
        const HValue h = eval_h(tifr_spec(req.branches, g), req.tolerance);
        const double inv = std::exp(-log_branch_norm(req.branches)) / g * h.value;
        return (1.0 - cdf) / g - inv - 1.0;
    }
    case Method::single_f: {
        const FadingParams f = single_f_params(req.branches, req.epsilon);
        return (1.0 - fisher_f::cdf(f, g)) / g - single_truncated_inverse(f, g) - 1.0;
    }
    case Method::monte_carlo: {
        const SampleSet s = draw(req);
        return EmpiricalCutoff(s).residual(g);
    }
    default: not_defined(MetricKind::opra, m);
    }
}

Gamma0Result solve_gamma0(const MetricRequest& req, double tol) {
    req.branches.validate();
    const Method m = req.method.value_or(Method::exact_h);
    Gamma0Result out;
    if (m == Method::monte_carlo) {
        const SampleSet s = draw(req);
        const EmpiricalCutoff cut(s);
        out = solve_gamma0([&](double g) { return cut.residual(g); }, tol);
    } else {
        if (m == Method::exact_h && req.branches.size() > 3)
            fail(ErrorCode::dimension_refused, "exact cutoff path needs L <= 3");
        out = solve_gamma0([&](double g) { return gamma0_residual(req, g); }, tol);
    }
    out.method = m;
    return out;
}

} // namespace fsum
