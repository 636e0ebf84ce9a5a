#include "oracles.hpp"

#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"

#include <doctest.h>

#include <cmath>

using namespace fsum;
namespace ff = fsum::fisher_f;

namespace {

MetricRequest request(const BranchSet& b, std::optional<Method> method = std::nullopt) {
    MetricRequest r;
    r.branches = b;
    r.method = method;
    return r;
}

double value(MetricKind k, const BranchSet& b, std::optional<Method> method = std::nullopt) {
    return evaluate_metric(k, request(b, method)).value;
}

// E[g(Z)] for one F law by generic half-line quadrature of the density
template <class G>
double f_mean(const FadingParams& p, G g) {
    return oracle::integrate_half_line([&](double x) { return g(x) * oracle::f_pdf(p.m, p.ms, p.mean_snr, x); });
}

const FadingParams kOne{1.5, 5.0, 10.0};
const BranchSet kPair = BranchSet::iid(FadingParams{2.5, 4.5, 10.0}, 2);

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("awgn capacity") {
    CHECK(capacity_awgn(0.0) == 0.0);
    CHECK(capacity_awgn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(capacity_awgn(15.0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("outage probability") {
    MetricRequest r = request(BranchSet::iid(FadingParams{1.5, 5.0, 1e3}, 2));
    r.threshold = 1e-12;
    CHECK(outage_probability(r).value < 1e-12);

    r.threshold = 1.0;
    const double exact = outage_probability(r).value;
    r.method = Method::asymptotic;
    CHECK(outage_probability(r).value == doctest::Approx(exact).epsilon(0.05));

    MetricRequest three = request(BranchSet::iid(kOne, 3));
    const MetricResult e = outage_probability(three);
    CHECK(e.method == Method::exact_h);
    three.method = Method::monte_carlo;
    const MetricResult mc = outage_probability(three);
    const double se = std::sqrt(e.value * (1.0 - e.value) / three.mc_samples);
    CHECK(std::abs(mc.value - e.value) < 3.0 * se);

    three.method = Method::oracle;
    CHECK(outage_probability(three).value == doctest::Approx(e.value).epsilon(1e-4));
}

TEST_CASE("outage falls with mean SNR and with branch count") {
    double prev = 1.0;
    for (double db : {0.0, 5.0, 10.0, 15.0}) {
        const double v = value(MetricKind::outage, BranchSet::iid(FadingParams{1.5, 5.0, db_to_linear(db)}, 2));
        CHECK(v >= 0.0);
        CHECK(v < prev);
        prev = v;
    }
    const FadingParams p{1.5, 5.0, 1.0};
    CHECK(value(MetricKind::outage, BranchSet::iid(p, 3)) < value(MetricKind::outage, BranchSet::iid(p, 2)));
}

TEST_CASE("effective capacity") {
    const BranchSet one({kOne});
    CHECK(value(MetricKind::effective_capacity, one) == doctest::Approx(2.46334972305834411362).epsilon(1e-6));
    CHECK(value(MetricKind::effective_capacity, one, Method::single_f) ==
          doctest::Approx(value(MetricKind::effective_capacity, one)).epsilon(1e-5));

    MetricRequest small = request(one);
    small.delay_exponent = 1e-3;
    CHECK(effective_capacity(small).value == doctest::Approx(value(MetricKind::ora, one)).epsilon(0.01));

    CHECK(value(MetricKind::effective_capacity, kPair, Method::oracle) ==
          doctest::Approx(3.912850850123445708).epsilon(1e-8));
    CHECK(value(MetricKind::effective_capacity, kPair, Method::exact_h) ==
          doctest::Approx(3.912850850123445708).epsilon(1e-5));
}

TEST_CASE("effective capacity falls with the delay exponent") {
    MetricRequest r = request(BranchSet::iid(FadingParams{5.0, 8.0, 10.0}, 3));
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        r.delay_exponent = a;
        const double v = effective_capacity(r).value;
        CAPTURE(a);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("capacity with channel inversion") {
    const FadingParams p{2.5, 4.5, 10.0};
    // one branch: 1/E[1/Z] from the density
    const double inv = f_mean(p, [](double x) { return 1.0 / x; });
    CHECK(ff::moment(p, -1.0) == doctest::Approx(inv).epsilon(1e-8));
    // the exact path carries the s regularization, a few parts in 1e6
    CHECK(value(MetricKind::cifr, BranchSet({p})) == doctest::Approx(std::log2(1.0 + 1.0 / inv)).epsilon(1e-5));

    CHECK(value(MetricKind::cifr, kPair, Method::oracle) == doctest::Approx(3.869835479124293779).epsilon(1e-8));
    CHECK(value(MetricKind::cifr, kPair) == doctest::Approx(3.869835479124293779).epsilon(1e-4));

    const BranchSet richer = BranchSet::iid(FadingParams{3.5, 4.5, 10.0}, 2);
    CHECK(value(MetricKind::cifr, richer) > value(MetricKind::cifr, kPair));

    MetricRequest r = request(BranchSet::iid(FadingParams{2.0, 4.0, 10.0}, 2));
    const MetricResult exact = capacity_cifr(r);
    r.method = Method::monte_carlo;
    const MetricResult mc = capacity_cifr(r);
    CHECK(std::abs(mc.value - exact.value) < 3.0 * mc.error_estimate + 1e-4 * exact.value);

    try {
        value(MetricKind::cifr, BranchSet::iid(FadingParams{0.4, 4.0, 10.0}, 2));
        FAIL("expected a divergent inverse mean");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::divergent);
    }
}

TEST_CASE("truncated inversion") {
    MetricRequest r = request(kPair);
    r.cutoff = 1e-6;
    CHECK(std::abs(capacity_tifr(r).value - value(MetricKind::cifr, kPair)) < 1e-3);
    r.cutoff = 1e4;
    CHECK(capacity_tifr(r).value < 1e-6);

    MetricRequest t = request(BranchSet::iid(FadingParams{2.0, 4.0, 10.0}, 2));
    t.cutoff = 0.5;
    const MetricResult exact = capacity_tifr(t);
    t.method = Method::monte_carlo;
    const MetricResult mc = capacity_tifr(t);
    CHECK(std::abs(mc.value - exact.value) < 3.0 * mc.error_estimate + 1e-4 * exact.value);

    // best cutoff beats plain inversion
    double best = 0.0;
    for (double z0 : {0.01, 0.1, 0.3, 1.0, 3.0}) {
        r.cutoff = z0;
        best = std::max(best, capacity_tifr(r).value);
    }
    CHECK(best >= value(MetricKind::cifr, kPair));
}

TEST_CASE("ergodic capacity") {
    const double want = f_mean(kOne, [](double x) { return std::log2(1.0 + x); });
    CHECK(value(MetricKind::ora, BranchSet({kOne})) == doctest::Approx(want).epsilon(1e-6));
    CHECK(want == doctest::Approx(2.94988709176009204231).epsilon(1e-9));

    CHECK(value(MetricKind::ora, kPair, Method::oracle) == doctest::Approx(4.149014732036730481).epsilon(1e-8));
    CHECK(value(MetricKind::ora, kPair, Method::exact_h) == doctest::Approx(4.149014732036730481).epsilon(1e-4));

    const BranchSet det({FadingParams{1e5, 1e5, 10.0}});
    CHECK(value(MetricKind::ora, det) == doctest::Approx(std::log2(11.0)).epsilon(1e-3));

    for (const BranchSet& b : {kPair, BranchSet::iid(kOne, 3), BranchSet({FadingParams{2.0, 5.0, 10.0}, kOne})}) {
        CHECK(value(MetricKind::ora, b) <= capacity_awgn(b.total_mean()));
    }

    MetricRequest r = request(BranchSet::iid(FadingParams{2.0, 5.0, 10.0}, 2), Method::monte_carlo);
    const MetricResult mc = capacity_ora(r);
    const double approx = value(MetricKind::ora, r.branches, Method::single_f);
    const double oracle = value(MetricKind::ora, r.branches, Method::oracle);
    CHECK(std::abs(mc.value - oracle) < 3.0 * mc.error_estimate);
    CHECK(std::abs(approx - oracle) < 0.01 * oracle);
}

TEST_CASE("optimal rate adaptation") {
    const BranchSet one({kOne});
    const double g0 = solve_gamma0(request(one, Method::exact_h)).gamma0;
    CHECK(g0 == doctest::Approx(0.791973060174357258901).epsilon(1e-6));
    const double opra = value(MetricKind::opra, one, Method::exact_h);
    // s regularization bias of the exact path, about 2e-5 relative here
    CHECK(opra == doctest::Approx(2.99471660710931581151).epsilon(5e-5));
    // E[log2(Z / g0); Z >= g0] from the density
    const double want = oracle::integrate_half_line([&](double t) {
        const double x = g0 + t;
        return std::log2(x / g0) * oracle::f_pdf(kOne.m, kOne.ms, kOne.mean_snr, x);
    });
    CHECK(want == doctest::Approx(2.99471660710931581151).epsilon(1e-6));

    const double ora = value(MetricKind::ora, one);
    CHECK(opra >= ora);
    CHECK(opra - ora <= std::min(opra, -std::log2(g0)));

    for (const BranchSet& b : {kPair, BranchSet::iid(kOne, 3)}) {
        const double o = value(MetricKind::opra, b);
        const double e = value(MetricKind::ora, b);
        const double g = solve_gamma0(request(b, Method::single_f)).gamma0;
        CHECK(o >= e);
        CHECK(o - e <= std::min(o, -std::log2(g)));
    }

    const BranchSet det({FadingParams{1e4, 1e4, 10.0}});
    CHECK(value(MetricKind::opra, det) == doctest::Approx(std::log2(11.0)).epsilon(1e-3));
}

TEST_CASE("cutoff solver") {
    const Gamma0Result mild = solve_gamma0(request(BranchSet({FadingParams{50.0, 50.0, 1e3}})));
    CHECK(mild.gamma0 > 0.99);
    CHECK(mild.gamma0 <= 1.0);

    const BranchSet b = BranchSet::iid(kOne, 2);
    MetricRequest r = request(b, Method::exact_h);
    const Gamma0Result g = solve_gamma0(r);
    CHECK(std::abs(gamma0_residual(r, g.gamma0)) < 1e-6);
    CHECK(g.iterations <= 40);
    r.method = Method::monte_carlo;
    r.mc_samples = 1000000;
    CHECK(std::abs(solve_gamma0(r).gamma0 - g.gamma0) < 2e-3);

    // a residual without a sign change fails
    CHECK_THROWS_AS(solve_gamma0([](double) { return 1.0; }), Error);
    const Gamma0Result lin = solve_gamma0([](double x) { return 0.3 - x; });
    CHECK(lin.gamma0 == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("capacities rise and outage falls with each branch mean") {
    const FadingParams lo{2.0, 5.0, 5.0};
    const FadingParams hi{2.0, 5.0, 8.0};
    const FadingParams other{1.5, 6.0, 3.0};
    const BranchSet a({lo, other});
    const BranchSet b({hi, other});
    for (MetricKind k : {MetricKind::effective_capacity, MetricKind::cifr, MetricKind::tifr, MetricKind::ora,
                         MetricKind::opra}) {
        CAPTURE(to_string(k));
        CHECK(value(k, b) >= value(k, a));
    }
    CHECK(value(MetricKind::outage, b) <= value(MetricKind::outage, a));
}

TEST_CASE("high SNR gaps shrink") {
    double tifr_gap = std::numeric_limits<double>::infinity();
    double opra_gap = tifr_gap;
    for (double mean : {10.0, 100.0, 1000.0}) {
        MetricRequest r = request(BranchSet::iid(FadingParams{2.5, 4.5, mean}, 2));
        r.cutoff = 0.5;
        const double t = capacity_tifr(r).value - capacity_cifr(r).value;
        r.method = Method::single_f;
        const double o = capacity_opra(r).value - capacity_ora(r).value;
        CHECK(t < tifr_gap);
        CHECK(o < opra_gap);
        tifr_gap = t;
        opra_gap = o;
    }
}

TEST_CASE("fallback is reported") {
    MetricRequest r = request(BranchSet::iid(kOne, 4), Method::exact_h);
    r.threshold = 1.0;
    const MetricResult out = outage_probability(r);
    CHECK(out.method != Method::exact_h);
    REQUIRE_FALSE(out.notes.empty());
    r.fallback = false;
    CHECK_THROWS_AS(outage_probability(r), Error);
}

TEST_CASE("method and metric compatibility") {
    CHECK_THROWS_AS(value(MetricKind::cifr, kPair, Method::asymptotic), Error);
    CHECK(default_method(MetricKind::outage) == Method::exact_h);
    CHECK(default_method(MetricKind::ora) == Method::single_f);
}

}
