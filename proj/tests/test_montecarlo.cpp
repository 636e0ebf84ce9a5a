#include "oracles.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/sum_dist.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace fsum;
namespace ff = fsum::fisher_f;

namespace {

double sample_mean(const SampleSet& s) {
    double acc = 0.0;
    for (double x : s.draws)
        acc += x;
    return acc / static_cast<double>(s.count());
}

} // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("draws are sorted, positive and seeded") {
    const BranchSet b({FadingParams{2.0, 4.0, 1.0}, FadingParams{0.3, 2.5, 0.2}});
    const SampleSet s = sample_sum(b, 20000, 9);
    REQUIRE(s.count() == 20000);
    CHECK(std::is_sorted(s.draws.begin(), s.draws.end()));
    CHECK(s.draws.front() > 0.0);
    CHECK_NOTHROW(s.validate());
    CHECK(sample_sum(b, 20000, 9).draws == s.draws);
    CHECK(sample_sum(b, 20000, 10).draws != s.draws);
}

TEST_CASE("draws do not depend on the thread count") {
    const BranchSet b = BranchSet::iid(FadingParams{1.5, 5.0, 1.0}, 3);
    const SampleSet one = sample_sum(b, 30000, 4, 1);
    CHECK(sample_sum(b, 30000, 4, 3).draws == one.draws);
    CHECK(sample_sum(b, 30000, 4, 8).draws == one.draws);
}

TEST_CASE("one branch follows the F law") {
    const FadingParams p{1.5, 5.0, 1.0};
    const KSReport r = ks_test([&](double g) { return ff::cdf(p, g); }, sample_sum(BranchSet({p}), 10000, 2));
    CHECK(r.pass);
}

TEST_CASE("mean of three branches") {
    const BranchSet b({FadingParams{2.0, 6.0, 1.0}, FadingParams{1.5, 5.0, 2.0}, FadingParams{3.0, 7.0, 0.5}});
    const SampleSet s = sample_sum(b, 100000, 5);
    double var = 0.0;
    for (const auto& p : b.branches)
        var += ff::moment(p, 2.0) - p.mean_snr * p.mean_snr;
    CHECK(std::abs(sample_mean(s) - 3.5) < 3.0 * std::sqrt(var / 1e5));
}

TEST_CASE("branch substreams are uncorrelated") {
    auto g0 = substream(1, 0, 0);
    auto g1 = substream(1, 1, 0);
    std::uniform_real_distribution<double> u;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = u(g0), y = u(g1);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double cov = sxy / n - sx / n * sy / n;
    const double corr = cov / std::sqrt((sxx / n - sx * sx / (n * n)) * (syy / n - sy * sy / (n * n)));
    CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("empirical distribution") {
    SampleSet s;
    s.draws = {0.5, 1.0, 2.0, 4.0, 8.0};
    CHECK(empirical_cdf(s, 0.1) == 0.0);
    CHECK(empirical_cdf(s, 9.0) == 1.0);
    CHECK(empirical_cdf(s, 2.0) == doctest::Approx(3.0 / 5.0));
    CHECK(empirical_cdf(s, 2.0) == doctest::Approx((5.0 + 1.0) / (2.0 * 5.0)));
    CHECK_THROWS_AS(empirical_cdf(SampleSet{}, 1.0), Error);
}

TEST_CASE("sample csv round trip") {
    const SampleSet s = sample_sum(BranchSet({FadingParams{2.0, 4.0, 1.0}}), 50, 3);
    std::stringstream io;
    write_sample_csv(io, s);
    const std::string text = io.str();
    CHECK(text.rfind("index,value\n", 0) == 0);
    const SampleSet back = read_sample_csv(io);
    REQUIRE(back.count() == s.count());
    for (std::size_t i = 0; i < s.count(); ++i)
        CHECK(back.draws[i] == doctest::Approx(s.draws[i]).epsilon(1e-15));
}

TEST_CASE("outage estimate within the binomial error bar") {
    const BranchSet b = BranchSet::iid(FadingParams{1.5, 5.0, 10.0}, 2);
    const SampleSet s = sample_sum(b, 100000, 8);
    McMetric spec;
    spec.threshold = 1.0;
    const MetricResult r = estimate_metric(s, spec);
    const double p = sum_cdf(b, 1.0);
    CHECK(std::abs(r.value - p) <= 3.0 * std::sqrt(p * (1.0 - p) / 1e5));
    CHECK(std::isfinite(r.error_estimate));
}

TEST_CASE("ergodic and effective capacity estimates") {
    const FadingParams p{1.5, 5.0, 10.0};
    const SampleSet s = sample_sum(BranchSet({p}), 100000, 12);
    McMetric ora;
    ora.kind = MetricKind::ora;
    const MetricResult r = estimate_metric(s, ora);
    const double want = oracle::integrate_half_line([&](double x) { return std::log2(1.0 + x) * ff::pdf(p, x); });
    CHECK(std::abs(r.value - want) < 3.0 * r.error_estimate);

    const BranchSet pair = BranchSet::iid(FadingParams{2.5, 4.5, 10.0}, 2);
    McMetric ec;
    ec.kind = MetricKind::effective_capacity;
    ec.delay_exponent = 1.0;
    const MetricResult e = estimate_metric(sample_sum(pair, 100000, 13), ec);
    CHECK(std::abs(e.value - 3.912850850123445708) < 3.0 * e.error_estimate);
}

TEST_CASE("standard errors shrink like one over root v") {
    const BranchSet b = BranchSet::iid(FadingParams{2.0, 5.0, 10.0}, 2);
    McMetric spec;
    spec.kind = MetricKind::ora;
    double ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double a = estimate_metric(sample_sum(b, 20000, seed), spec).error_estimate;
        const double c = estimate_metric(sample_sum(b, 40000, seed + 100), spec).error_estimate;
        ratio += c / a;
    }
    ratio /= 20.0;
    CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("inverse mean flags divergence") {
    const BranchSet b = BranchSet::iid(FadingParams{0.4, 4.0, 1.0}, 2);
    McMetric spec;
    spec.kind = MetricKind::cifr;
    spec.total_m = b.total_m();
    const MetricResult r = estimate_metric(sample_sum(b, 1000, 1), spec);
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0].find("divergent") != std::string::npos);
}

TEST_CASE("empirical cutoff residual falls through zero") {
    const SampleSet s = sample_sum(BranchSet::iid(FadingParams{1.5, 5.0, 10.0}, 2), 50000, 3);
    const EmpiricalCutoff cut(s);
    CHECK(cut.residual(0.05) > 0.0);
    CHECK(cut.residual(1.0) < 0.0);
}

}
