#include "fsum/approximation.hpp"

#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fsum {

namespace {

void require_third_moments(const BranchSet& b) {
    b.validate();
    for (std::size_t l = 0; l < b.size(); ++l) {
        if (!(b[l].ms > 3.0)) {
            std::ostringstream msg;
            msg << "moment matching needs ms > 3 on every branch (branch " << (l + 1) << " has ms = " << b[l].ms
                << ")";
            fail(ErrorCode::moment_missing, msg.str());
        }
    }
}

double h_ratio(const FadingParams& p) { return (1.0 + p.m) * (p.ms - 1.0) / (p.m * (p.ms - 2.0)); }

double y_ratio(const FadingParams& p) { return (p.ms - 1.0) * (2.0 + p.m) / (p.m * (p.ms - 3.0)); }

} // namespace

MomentSummary summarize_moments(const BranchSet& b, const std::vector<double>& eps) {
    require_third_moments(b);
    if (eps.size() != b.size())
        fail(ErrorCode::invalid_parameters, "one adjustment factor per branch is required");
    double g = 0.0, q = 0.0, cube = 0.0, qc = 0.0;
    for (std::size_t l = 0; l < b.size(); ++l) {
        const double gl = b[l].mean_snr;
        const double h = h_ratio(b[l]);
        const double y = y_ratio(b[l]);
        g += gl;
        q += (h - eps[l] - 1.0) * gl * gl;
        cube += (h * y - eps[l] * y - 1.0) * gl * gl * gl;
        qc += (h - eps[l] - 1.0) * gl * gl * gl;
    }
    MomentSummary s;
    s.mean = g;
    s.H = q / (g * g) + 1.0;
    s.Y = (cube + g * g * g + 3.0 * g * q - 3.0 * qc) / (g * (q + g * g));
    return s;
}

FadingParams params_from_summary(const MomentSummary& s) {
    const double h = s.H, y = s.Y;
    FadingParams p;
    p.m = -2.0 * (h - y) / (h - 2.0 * y + h * y);
    p.ms = (4.0 * h - 3.0 * y - 1.0) / (2.0 * h - y - 1.0);
    p.mean_snr = s.mean;
    std::ostringstream msg;
    msg.precision(10);
    if (!(p.m > 0.0) || !std::isfinite(p.m))
        msg << "matched m_F = " << p.m << " is not positive (H_F=" << h << ", Y_F=" << y << ")";
    else if (!(p.ms > 1.0) || !std::isfinite(p.ms))
        msg << "matched ms_F = " << p.ms << " does not exceed 1 (H_F=" << h << ", Y_F=" << y << ")";
    else
        return p;
    fail(ErrorCode::invalid_parameters, msg.str());
}

FadingParams match_moments(const BranchSet& b, const std::vector<double>& eps) {
    return params_from_summary(summarize_moments(b, eps));
}

FadingParams match_moments(const BranchSet& b, double eps) {
    return match_moments(b, std::vector<double>(b.size(), eps));
}

FadingParams match_moments_iid(const FadingParams& p, std::size_t count, double eps) {
    require_third_moments(BranchSet::iid(p, 1));
    if (count == 0)
        fail(ErrorCode::invalid_parameters, "branch count must be at least 1");
    const double L = static_cast<double>(count);
    const double h = h_ratio(p) - eps;
    const double y = y_ratio(p);
    MomentSummary s;
    s.mean = L * p.mean_snr;
    s.H = (h - 1.0) / L + 1.0;
    s.Y = (h * y + L * L + 3.0 * L * h - 3.0 * L - 3.0 * h + 2.0) / (L * h - L + L * L);
    return params_from_summary(s);
}

std::vector<double> sum_raw_moments(const BranchSet& b, int order) {
    b.validate();
    if (order < 0)
        fail(ErrorCode::invalid_parameters, "moment order must be nonnegative");
    std::vector<double> acc(order + 1, 0.0);
    acc[0] = 1.0;
    for (const auto& p : b.branches) {
        std::vector<double> mine(order + 1, 1.0);
        for (int k = 1; k <= order; ++k)
            mine[k] = fisher_f::moment(p, k);
        std::vector<double> next(order + 1, 0.0);
        for (int k = 0; k <= order; ++k) {
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                next[k] += binom * acc[j] * mine[k - j];
                binom = binom * (k - j) / (j + 1);
            }
        }
        acc = std::move(next);
    }
    return acc;
}

double ks_statistic(const CdfFunction& cdf, const SampleSet& sample) {
    if (sample.draws.empty())
        fail(ErrorCode::empty_sample, "KS statistic of an empty sample");
    std::vector<double> z = sample.draws;
    if (!std::is_sorted(z.begin(), z.end()))
        std::sort(z.begin(), z.end());
    const double v = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = cdf(z[i]);
        if (!std::isfinite(f))
            fail(ErrorCode::domain, "reference cdf is not finite inside the KS statistic");
        d = std::max({d, (i + 1) / v - f, f - i / v});
    }
    return d;
}

double ks_critical(std::size_t v, double alpha) {
    if (v == 0)
        fail(ErrorCode::domain, "KS critical value needs v >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        fail(ErrorCode::domain, "significance must lie in (0, 1)");
    return std::sqrt(-std::log(alpha / 2.0) / (2.0 * static_cast<double>(v)));
}

KSReport ks_test(const CdfFunction& cdf, const SampleSet& sample, double alpha) {
    KSReport r;
    r.statistic = ks_statistic(cdf, sample);
    r.count = sample.count();
    r.alpha = alpha;
    r.critical = ks_critical(r.count, alpha);
    r.pass = r.statistic < r.critical;
    return r;
}

double cdf_quantile(const CdfFunction& cdf, double p, double hint) {
    if (!(p > 0.0 && p < 1.0))
        fail(ErrorCode::domain, "quantile level must lie in (0, 1)");
    double lo = hint > 0.0 ? hint : 1.0;
    double hi = lo;
    for (int i = 0; i < 200 && cdf(lo) > p; ++i)
        lo *= 0.5;
    for (int i = 0; i < 200 && cdf(hi) < p; ++i)
        hi *= 2.0;
    if (!(cdf(lo) <= p && cdf(hi) >= p))
        fail(ErrorCode::no_convergence, "could not bracket the quantile");
    for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-12; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

EpsilonFit optimize_epsilon(const BranchSet& b, const CdfFunction& reference_cdf, const EpsilonOptions& opts) {
    b.validate();
    const auto& g = opts.grid;
    if (!(g.step > 0.0) || g.stop < g.start)
        fail(ErrorCode::invalid_parameters, "epsilon grid must be nonempty with a positive step");
    if (opts.z_points < 2)
        fail(ErrorCode::invalid_parameters, "need at least two z points");

    const double zlo = cdf_quantile(reference_cdf, opts.tail, b.total_mean());
    const double zhi = cdf_quantile(reference_cdf, 1.0 - opts.tail, b.total_mean());
    std::vector<double> z(opts.z_points), ref(opts.z_points);
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = zlo * std::pow(zhi / zlo, static_cast<double>(i) / (z.size() - 1));
        ref[i] = reference_cdf(z[i]);
    }

    EpsilonFit best;
    best.report.statistic = std::numeric_limits<double>::infinity();
    bool found = false;
    const int steps = static_cast<int>(std::floor((g.stop - g.start) / g.step + 1e-9));
    for (int k = 0; k <= steps; ++k) {
        const double eps = g.start + k * g.step;
        FadingParams f;
        try {
            f = match_moments(b, eps);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::invalid_parameters) {
                ++best.skipped;
                continue;
            }
            throw;
        }
        double d = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double gap = std::abs(fisher_f::cdf(f, z[i]) - ref[i]);
            d = std::isnan(gap) ? gap : std::max(d, gap);
            if (std::isnan(d))
                break;
        }
        if (!std::isfinite(d)) {
            ++best.skipped;
            continue;
        }
        if (d < best.report.statistic) {
            best.epsilon = eps;
            best.params = f;
            best.report.statistic = d;
            found = true;
        }
    }
    if (!found)
        fail(ErrorCode::invalid_parameters, "every epsilon on the grid gives invalid matched parameters");
    best.report.count = opts.report_count;
    best.report.alpha = opts.alpha;
    best.report.critical = ks_critical(opts.report_count, opts.alpha);
    best.report.pass = best.report.statistic < best.report.critical;
    return best;
}

} // namespace fsum
