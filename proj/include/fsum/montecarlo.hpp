#pragma once

#include "fsum/fading.hpp"
#include "fsum/result.hpp"
#include "fsum/sample_set.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>

namespace fsum {

// Draws per substream block; block boundaries never depend on the thread count.
constexpr std::size_t kDrawBlock = 4096;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t branch, std::uint64_t block);

SampleSet sample_sum(const BranchSet& b, std::size_t count, std::uint64_t seed, unsigned threads = 0);

// count(draws <= z) / v
double empirical_cdf(const SampleSet& s, double z);

void write_sample_csv(std::ostream& os, const SampleSet& s);
SampleSet read_sample_csv(std::istream& is);

struct McMetric {
    MetricKind kind = MetricKind::outage;
    double threshold = 1.0;       // outage threshold
    double delay_exponent = 1.0;  // A
    double cutoff = 1.0;          // TIFR z0
    double gamma0 = 1.0;          // OPRA cutoff
    double total_m = 0.0;         // sum of m_l when known; flags divergent inverse means
};

MetricResult estimate_metric(const SampleSet& s, const McMetric& spec);

// Water-filling residual (1/g)(1 - F(g)) - E[1{Z >= g}/Z] - 1 on the empirical law.
class EmpiricalCutoff {
public:
    explicit EmpiricalCutoff(const SampleSet& s);
    double residual(double g0) const;

private:
    const SampleSet& s_;
    std::vector<double> tail_inverse_; // tail_inverse_[i] = sum_{k >= i} 1/z_k
};

} // namespace fsum
