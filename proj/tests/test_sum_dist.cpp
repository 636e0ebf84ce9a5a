#include "oracles.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/sum_dist.hpp"

#include <doctest.h>

#include <cmath>

using namespace fsum;
namespace ff = fsum::fisher_f;

namespace {

const FadingParams kA{2.0, 4.0, 1.0};
const FadingParams kB{1.5, 5.0, 2.0};

// Composite Simpson in log z over [lo, hi]; returns int z^n f(z) dz for n = 0..3 from one pass.
// Densities evaluated beyond a few hundred mean values sit at the absolute error floor of the
// contour sum, so the grid stops there; the neglected tail is far below the tolerances used.
template <class F>
std::vector<double> log_grid_moments(F f, double lo, double hi, int intervals = 600) {
    std::vector<double> acc(4, 0.0);
    const double a = std::log(lo), h = (std::log(hi) - a) / intervals;
    for (int k = 0; k <= intervals; ++k) {
        const double z = std::exp(a + k * h);
        const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const double v = f(z) * z * w * h / 3.0; // dz = z du
        double zn = 1.0;
        for (int n = 0; n <= 3; ++n, zn *= z)
            acc[n] += v * zn;
    }
    return acc;
}

} // namespace

TEST_SUITE("sum_dist") {

TEST_CASE("one branch reduces to the F law") {
    const BranchSet b({kB});
    for (int i = 0; i < 9; ++i) {
        const double z = std::pow(10.0, -2.0 + i * 0.5);
        CAPTURE(z);
        CHECK(oracle::rel(sum_pdf(b, z), ff::pdf(kB, z)) < 1e-6);
        CHECK(oracle::rel(sum_cdf(b, z), ff::cdf(kB, z)) < 1e-6);
    }
}

TEST_CASE("two distinct branches against direct convolution") {
    const BranchSet b({kA, kB});
    const auto fa = [](double x) { return x > 0.0 ? oracle::f_pdf(2.0, 4.0, 1.0, x) : 0.0; };
    const auto fb = [](double x) { return x > 0.0 ? oracle::f_pdf(1.5, 5.0, 2.0, x) : 0.0; };
    for (double z : {0.5, 3.0, 9.0}) {
        CAPTURE(z);
        CHECK(oracle::rel(sum_pdf(b, z), oracle::convolve(fa, fb, z)) < 1e-4);
    }
    CHECK(sum_pdf(b, 3.0) == doctest::Approx(0.177917020386995272546).epsilon(1e-5));
    CHECK(oracle::rel(laplace_inversion_pdf(b, 3.0), sum_pdf(b, 3.0)) < 1e-4);
}

TEST_CASE("two i.i.d. branches") {
    const BranchSet b = BranchSet::iid(kA, 2);
    CHECK(sum_pdf(b, 2.0) == doctest::Approx(0.287161265581392501999).epsilon(1e-5));
    CHECK(sum_cdf(b, 2.0) == doctest::Approx(0.631151509361549021078).epsilon(1e-5));
    for (double z : {0.5, 1.0, 5.0}) {
        CHECK(oracle::rel(laplace_inversion_pdf(b, z), sum_pdf(b, z)) < 1e-4);
    }
    const double total = log_grid_moments([&](double z) { return sum_pdf(b, z); }, 1e-6, 300.0)[0];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("distribution near zero and against the empirical law") {
    const BranchSet b = BranchSet::iid(kA, 2);
    CHECK(sum_cdf(b, 1e-4) < 1e-8);
    const SampleSet s = sample_sum(b, 10000, 3);
    CHECK(std::abs(sum_cdf(b, 2.0) - empirical_cdf(s, 2.0)) < ks_critical(10000, 0.05));
}

TEST_CASE("exchange symmetry") {
    const FadingParams c{0.8, 3.5, 0.5};
    const BranchSet abc({kA, kB, c});
    const BranchSet cab({c, kA, kB});
    for (double z : {0.4, 2.0, 6.0}) {
        const SumEval x = sum_pdf_eval(abc, z);
        const SumEval y = sum_pdf_eval(cab, z);
        CHECK(std::abs(x.value - y.value) <= x.abs_error + y.abs_error + 1e-4 * x.value);
        const SumEval u = sum_cdf_eval(abc, z);
        const SumEval w = sum_cdf_eval(cab, z);
        CHECK(std::abs(u.value - w.value) <= u.abs_error + w.abs_error + 1e-4 * u.value);
    }
}

TEST_CASE("scaling every mean") {
    const double c = 3.7;
    const BranchSet b({kA, kB});
    const BranchSet bc({FadingParams{kA.m, kA.ms, c * kA.mean_snr}, FadingParams{kB.m, kB.ms, c * kB.mean_snr}});
    for (double z : {0.7, 4.0, 20.0}) {
        CAPTURE(z);
        CHECK(oracle::rel(sum_pdf(bc, z, 1e-8), sum_pdf(b, z / c, 1e-8) / c) < 1e-6);
    }
}

TEST_CASE("moments of the density") {
    const BranchSet b({FadingParams{2.0, 6.0, 1.0}, FadingParams{1.5, 7.0, 2.0}});
    const std::vector<double> raw = sum_raw_moments(b, 3);
    const std::vector<double> num = log_grid_moments([&](double z) { return sum_pdf(b, z); }, 1e-6, 300.0);
    // E[Z^n] from the per-branch moments by the binomial expansion, written out here
    const auto mom = [](const FadingParams& p, int n) { return n == 0 ? 1.0 : ff::moment(p, n); };
    CHECK(num[0] == doctest::Approx(1.0).epsilon(1e-4));
    for (int n = 1; n <= 3; ++n) {
        double want = 0.0;
        for (int k = 0; k <= n; ++k)
            want += std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) * mom(b[0], k) *
                    mom(b[1], n - k);
        CAPTURE(n);
        CHECK(raw[n] == doctest::Approx(want).epsilon(1e-12));
        CHECK(num[n] == doctest::Approx(want).epsilon(0.01));
    }
    CHECK(num[1] == doctest::Approx(3.0).epsilon(0.005));
}

TEST_CASE("asymptotic distribution") {
    const FadingParams p{1.0, 3.0, 2.0};
    const double z = 1e-3;
    CHECK(sum_cdf_asymptotic(BranchSet({p}), z) == doctest::Approx(p.ms * z / (p.mean_snr * (p.ms - 1.0))).epsilon(1e-12));

    const BranchSet high = BranchSet::iid(FadingParams{1.5, 5.0, 1e4}, 2);
    CHECK(sum_cdf_asymptotic(high, 1.0) / sum_cdf(high, 1.0) == doctest::Approx(1.0).epsilon(0.05));

    const BranchSet lo = BranchSet::iid(FadingParams{1.5, 5.0, 10.0}, 3);
    const BranchSet hi = BranchSet::iid(FadingParams{1.5, 5.0, 100.0}, 3);
    const double slope = std::log10(sum_cdf_asymptotic(hi, 1.0) / sum_cdf_asymptotic(lo, 1.0));
    CHECK(slope == doctest::Approx(-4.5).epsilon(1e-12));
}

TEST_CASE("Laplace oracle on one branch") {
    for (double z : {0.1, 0.5, 2.0, 10.0}) {
        CHECK(oracle::rel(laplace_inversion_pdf(BranchSet({kB}), z), ff::pdf(kB, z)) < 1e-5);
        CHECK(std::abs(laplace_inversion_cdf(BranchSet({kB}), z) - ff::cdf(kB, z)) < 1e-6);
    }
}

TEST_CASE("Laplace oracle normalizes for four branches") {
    const BranchSet b = BranchSet::iid(FadingParams{1.5, 5.0, 1.0}, 4);
    const double total = log_grid_moments([&](double z) { return laplace_inversion_pdf(b, z); }, 1e-4, 400.0)[0];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(laplace_inversion_cdf(b, 400.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("domain errors") {
    const BranchSet b({kA});
    CHECK_THROWS_AS(sum_pdf(b, 0.0), Error);
    CHECK_THROWS_AS(sum_cdf(b, -1.0), Error);
    CHECK_THROWS_AS(sum_pdf(BranchSet{}, 1.0), Error);
}

}
