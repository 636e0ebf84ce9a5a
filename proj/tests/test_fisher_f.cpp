#include "oracles.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace fsum;
namespace ff = fsum::fisher_f;

TEST_SUITE("fisher_f") {

TEST_CASE("m = 1, ms = 2 has density 2/(1+g)^3") {
    // B(1, 2) = 1/2 and the scale is 1, so f = 2 (1 + g)^-3 and F = 1 - (1 + g)^-2
    const FadingParams p{1.0, 2.0, 1.0};
    for (double g : {1e-9, 0.3, 1.0, 7.5}) {
        CHECK(ff::pdf(p, g) == doctest::Approx(2.0 / std::pow(1.0 + g, 3)).epsilon(1e-13));
        CHECK(ff::cdf(p, g) == doctest::Approx(1.0 - 1.0 / ((1.0 + g) * (1.0 + g))).epsilon(1e-13));
    }
    CHECK(ff::pdf(p, 1e-12) == doctest::Approx(2.0));
    CHECK(ff::cdf(p, 0.0) == 0.0);
    CHECK(ff::cdf(p, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("density against the written-out form") {
    for (double m : {0.5, 1.0, 2.3, 7.0}) {
        for (double ms : {1.5, 3.0, 12.0}) {
            for (double g : {1e-3, 0.4, 2.0, 60.0}) {
                CHECK(oracle::rel(ff::pdf({m, ms, 1.7}, g), oracle::f_pdf(m, ms, 1.7, g)) < 1e-12);
            }
        }
    }
}

TEST_CASE("normalization over the parameter grid") {
    for (double m : {0.5, 1.0, 1.5, 2.0, 5.0}) {
        for (double ms : {1.5, 2.5, 5.0, 15.0}) {
            for (double mean : {0.1, 1.0, 10.0}) {
                const FadingParams p{m, ms, mean};
                // substitute g = s t/(1-t) to map onto (0, 1)
                const double s = p.scale();
                boost::math::quadrature::tanh_sinh<double> q;
                const double total = q.integrate(
                    [&](double t) {
                        const double g = s * t / (1.0 - t);
                        return ff::pdf(p, g) * s / ((1.0 - t) * (1.0 - t));
                    },
                    0.0, 1.0);
                CAPTURE(m);
                CAPTURE(ms);
                CAPTURE(mean);
                CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("distribution is the integral of the density") {
    const FadingParams p{1.5, 5.0, 1.0};
    for (double g : {0.1, 1.0, 10.0}) {
        const double want = oracle::integrate([&](double x) { return ff::pdf(p, x); }, 0.0, g);
        CHECK(std::abs(ff::cdf(p, g) - want) <= 1e-8);
    }
    CHECK(ff::cdf(p, 0.1) == doctest::Approx(0.0568319918032160911073).epsilon(1e-12));
    CHECK(ff::cdf(p, 1.0) == doctest::Approx(0.656958833269618210736).epsilon(1e-12));
    CHECK(ff::cdf(p, 10.0) == doctest::Approx(0.998983592446514370687).epsilon(1e-12));
}

TEST_CASE("distribution stays finite for large shape parameters") {
    const FadingParams p{600.0, 800.0, 1.0};
    for (double g : {0.8, 1.0, 1.2}) {
        const double c = ff::cdf(p, g);
        CHECK(std::isfinite(c));
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    CHECK(ff::cdf(p, 0.8) < ff::cdf(p, 1.2));
}

TEST_CASE("mode is stationary") {
    const FadingParams p{2.0, 5.0, 1.0};
    const double mode = (p.m - 1.0) * (p.ms - 1.0) / (p.m * (p.ms + 1.0));
    const double h = 1e-6;
    const double slope = (ff::pdf(p, mode + h) - ff::pdf(p, mode - h)) / (2.0 * h);
    CHECK(std::abs(slope) < 1e-6);
    CHECK(ff::pdf(p, mode) > ff::pdf(p, 0.9 * mode));
    CHECK(ff::pdf(p, mode) > ff::pdf(p, 1.1 * mode));
}

TEST_CASE("mgf") {
    const FadingParams p{1.5, 5.0, 1.0};
    CHECK(std::abs(ff::mgf(p, 1e-12) - 1.0) < 1e-9);
    const double h = 1e-5;
    const double slope = (ff::mgf(p, 2.0 * h).real() - ff::mgf(p, h).real()) / h;
    CHECK(-slope == doctest::Approx(p.mean_snr).epsilon(1e-3));

    const double want = oracle::integrate_half_line([&](double g) { return std::exp(-g) * ff::pdf(p, g); });
    CHECK(oracle::rel(ff::mgf(p, 1.0).real(), want) < 1e-8);
    CHECK(ff::mgf(p, 1.0).real() == doctest::Approx(0.497398220913000821917828).epsilon(1e-12));
}

TEST_CASE("mgf is completely monotone on sampled points") {
    for (const FadingParams& p : {FadingParams{1.5, 5.0, 1.0}, FadingParams{0.7, 2.2, 3.0}}) {
        const double h = 0.02;
        for (double s = h; s + 2.0 * h <= 2.0; s += 0.1) {
            const double f0 = ff::mgf(p, s).real();
            const double f1 = ff::mgf(p, s + h).real();
            const double f2 = ff::mgf(p, s + 2.0 * h).real();
            CHECK(f0 > 0.0);
            CHECK(f0 - f1 >= 0.0);
            CHECK(f2 - 2.0 * f1 + f0 >= -1e-14);
        }
    }
}

TEST_CASE("moments") {
    const FadingParams p{2.2, 6.0, 1.7};
    CHECK(ff::moment(p, 1.0) == doctest::Approx(1.7).epsilon(1e-13));
    const double h = (1.0 + p.m) * (p.ms - 1.0) / (p.m * (p.ms - 2.0));
    CHECK(ff::moment(p, 2.0) == doctest::Approx(h * 1.7 * 1.7).epsilon(1e-13));
    const double num = oracle::integrate_half_line([&](double g) { return g * g * g * ff::pdf(p, g); });
    CHECK(ff::moment(p, 3.0) == doctest::Approx(num).epsilon(1e-8));
    const double inv = oracle::integrate_half_line([&](double g) { return ff::pdf(p, g) / g; });
    CHECK(ff::moment(p, -1.0) == doctest::Approx(inv).epsilon(1e-8));

    try {
        ff::moment({1.5, 3.0, 1.0}, 4.0);
        FAIL("expected a missing moment");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::moment_missing);
    }
}

TEST_CASE("amount of fading") {
    CHECK(ff::amount_of_fading({1.0, 4.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-14));
    const FadingParams p{2.7, 5.3, 0.8};
    const double ratio = ff::moment(p, 2.0) / (ff::moment(p, 1.0) * ff::moment(p, 1.0)) - 1.0;
    CHECK(ff::amount_of_fading(p) == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(ff::amount_of_fading({1e7, 1e7, 1.0}) < 1e-6);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(FadingParams({0.0, 2.0, 1.0}).validate(), Error);
    CHECK_THROWS_AS(FadingParams({1.0, 1.0, 1.0}).validate(), Error);
    CHECK_THROWS_AS(FadingParams({1.0, 2.0, -1.0}).validate(), Error);
    CHECK_THROWS_AS(ff::pdf({1.0, 0.5, 1.0}, 1.0), Error);
}

TEST_CASE("sampler moments") {
    const FadingParams p{1.5, 5.0, 1.0};
    const SampleSet s = ff::sample(p, 100000, 11);
    REQUIRE(s.count() == 100000);
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (double x : s.draws) {
        m1 += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    const double v = static_cast<double>(s.count());
    m1 /= v;
    m2 /= v;
    m4 /= v;
    const double se1 = std::sqrt((ff::moment(p, 2.0) - 1.0) / v);
    CHECK(std::abs(m1 - 1.0) < 3.0 * se1);
    const double se2 = std::sqrt((m4 - m2 * m2) / v);
    CHECK(std::abs(m2 - ff::moment(p, 2.0)) < 3.0 * se2);
}

TEST_CASE("sampler is seeded and passes a KS check") {
    const FadingParams p{2.0, 4.0, 1.3};
    const SampleSet a = ff::sample(p, 10000, 5);
    const SampleSet b = ff::sample(p, 10000, 5);
    CHECK(a.draws == b.draws);
    CHECK(ff::sample(p, 10000, 6).draws != a.draws);
    const KSReport r = ks_test([&](double g) { return ff::cdf(p, g); }, a);
    CHECK(r.pass);
}

}
