#include "fsum/montecarlo.hpp"

#include "fsum/error.hpp"
#include "fsum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace fsum {

namespace {

constexpr double kLn2 = std::numbers::ln2;

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

template <class F>
Moments sample_moments(const std::vector<double>& z, F&& g) {
    // two-pass for a stable variance
    double s = 0.0;
    for (double x : z)
        s += g(x);
    const double n = static_cast<double>(z.size());
    const double mean = s / n;
    double ss = 0.0;
    for (double x : z) {
        const double d = g(x) - mean;
        ss += d * d;
    }
    return {mean, z.size() > 1 ? ss / (n - 1.0) : 0.0};
}

} // namespace

void SampleSet::validate() const {
    if (draws.empty())
        fail(ErrorCode::empty_sample, "sample set has no draws");
    for (std::size_t i = 0; i < draws.size(); ++i) {
        if (!(draws[i] > 0.0))
            fail(ErrorCode::invalid_parameters, "sample draws must be positive");
        if (i && draws[i] < draws[i - 1])
            fail(ErrorCode::invalid_parameters, "sample draws must be sorted");
    }
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t branch, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(branch), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

SampleSet sample_sum(const BranchSet& b, std::size_t count, std::uint64_t seed, unsigned threads) {
    b.validate();
    if (count == 0)
        fail(ErrorCode::invalid_parameters, "sample count must be at least 1");
    SampleSet out;
    out.seed = seed;
    out.fingerprint = b.fingerprint();
    out.draws.assign(count, 0.0);
    const std::size_t blocks = (count + kDrawBlock - 1) / kDrawBlock;
    parallel_for(blocks, threads, [&](std::size_t blk) {
        const std::size_t begin = blk * kDrawBlock;
        const std::size_t end = std::min(count, begin + kDrawBlock);
        for (std::size_t l = 0; l < b.size(); ++l) {
            const FadingParams& p = b[l];
            auto gen = substream(seed, l, blk);
            std::gamma_distribution<double> gx(p.m, 1.0);
            std::gamma_distribution<double> gy(p.ms, 1.0);
            const double scale = p.scale();
            for (std::size_t i = begin; i < end; ++i) {
                const double x = gx(gen);
                const double y = gy(gen);
                out.draws[i] += scale * x / y;
            }
        }
        // a shape-m gamma draw can underflow to zero for tiny m
        for (std::size_t i = begin; i < end; ++i)
            out.draws[i] = std::max(out.draws[i], std::numeric_limits<double>::min());
    });
    std::sort(out.draws.begin(), out.draws.end());
    return out;
}

double empirical_cdf(const SampleSet& s, double z) {
    if (s.draws.empty())
        fail(ErrorCode::empty_sample, "empirical CDF of an empty sample");
    const auto it = std::upper_bound(s.draws.begin(), s.draws.end(), z);
    return static_cast<double>(it - s.draws.begin()) / static_cast<double>(s.draws.size());
}

void write_sample_csv(std::ostream& os, const SampleSet& s) {
    os << "index,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.draws.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, s.draws[i]);
        os << buf;
    }
}

SampleSet read_sample_csv(std::istream& is) {
    SampleSet s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("index", 0) == 0))
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(ErrorCode::invalid_parameters, "sample CSV line " + std::to_string(lineno) + " has no comma");
        s.draws.push_back(std::stod(line.substr(comma + 1)));
    }
    std::sort(s.draws.begin(), s.draws.end());
    s.validate();
    return s;
}

MetricResult estimate_metric(const SampleSet& s, const McMetric& spec) {
    if (s.draws.empty())
        fail(ErrorCode::empty_sample, "metric estimate from an empty sample");
    const auto& z = s.draws;
    const double v = static_cast<double>(z.size());
    MetricResult r;
    r.method = Method::monte_carlo;
    r.diagnostics["samples"] = v;
    switch (spec.kind) {
    case MetricKind::outage: {
        const double p = empirical_cdf(s, spec.threshold);
        r.value = p;
        r.error_estimate = std::sqrt(p * (1.0 - p) / v);
        break;
    }
    case MetricKind::ora: {
        const auto m = sample_moments(z, [](double x) { return std::log2(1.0 + x); });
        r.value = m.mean;
        r.error_estimate = std::sqrt(m.var / v);
        break;
    }
    case MetricKind::opra: {
        const double g0 = spec.gamma0;
        const auto m = sample_moments(z, [g0](double x) { return std::max(0.0, std::log2(x / g0)); });
        r.value = m.mean;
        r.error_estimate = std::sqrt(m.var / v);
        r.diagnostics["gamma0"] = g0;
        break;
    }
    case MetricKind::cifr: {
        const auto m = sample_moments(z, [](double x) { return 1.0 / x; });
        r.value = std::log2(1.0 + 1.0 / m.mean);
        r.error_estimate = std::sqrt(m.var / v) / (kLn2 * m.mean * (m.mean + 1.0));
        if (spec.total_m > 0.0 && spec.total_m <= 1.0)
            r.notes.push_back("divergent estimator: E[1/Z] is infinite for sum of m <= 1");
        break;
    }
    case MetricKind::tifr: {
        const double z0 = spec.cutoff;
        const auto first = std::lower_bound(z.begin(), z.end(), z0);
        double sx = 0.0, sy = 0.0;
        for (auto it = first; it != z.end(); ++it)
            sx += 1.0 / *it;
        sy = static_cast<double>(z.end() - first);
        const double mx = sx / v, my = sy / v;
        // covariance of (1{Z>=z0}/Z, 1{Z>=z0})
        double vxx = 0.0, vyy = 0.0, vxy = 0.0;
        for (double x : z) {
            const double xi = x >= z0 ? 1.0 / x : 0.0;
            const double yi = x >= z0 ? 1.0 : 0.0;
            vxx += (xi - mx) * (xi - mx);
            vyy += (yi - my) * (yi - my);
            vxy += (xi - mx) * (yi - my);
        }
        const double den = std::max(v - 1.0, 1.0);
        vxx /= den;
        vyy /= den;
        vxy /= den;
        if (mx <= 0.0) {
            r.value = 0.0;
            r.error_estimate = 0.0;
            break;
        }
        const double rate = std::log2(1.0 + 1.0 / mx);
        r.value = rate * my;
        const double gx = -my / (kLn2 * mx * (mx + 1.0));
        const double gy = rate;
        r.error_estimate = std::sqrt(std::max(0.0, gx * gx * vxx + 2.0 * gx * gy * vxy + gy * gy * vyy) / v);
        break;
    }
    case MetricKind::effective_capacity: {
        const double a = spec.delay_exponent;
        if (!(a > 0.0))
            fail(ErrorCode::domain, "delay exponent must be positive");
        const auto m = sample_moments(z, [a](double x) { return std::exp(-a * std::log1p(x)); });
        r.value = -std::log2(m.mean) / a;
        r.error_estimate = std::sqrt(m.var / v) / (a * kLn2 * m.mean);
        break;
    }
    }
    return r;
}

EmpiricalCutoff::EmpiricalCutoff(const SampleSet& s) : s_(s), tail_inverse_(s.draws.size() + 1, 0.0) {
    if (s.draws.empty())
        fail(ErrorCode::empty_sample, "cutoff residual from an empty sample");
    for (std::size_t i = s.draws.size(); i-- > 0;)
        tail_inverse_[i] = tail_inverse_[i + 1] + 1.0 / s.draws[i];
}

double EmpiricalCutoff::residual(double g0) const {
    const auto& z = s_.draws;
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), g0) - z.begin());
    const double v = static_cast<double>(z.size());
    const double above = static_cast<double>(z.size() - i) / v;
    return above / g0 - tail_inverse_[i] / v - 1.0;
}

} // namespace fsum
