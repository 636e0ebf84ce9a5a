#include "fsum/fisher_f.hpp"

#include "fsum/error.hpp"
#include "fsum/montecarlo.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsum::fisher_f {

namespace {

double ln_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

} // namespace

double log_pdf(const FadingParams& p, double gamma) {
    p.validate();
    if (!(gamma > 0.0))
        fail(ErrorCode::domain, "F pdf needs gamma > 0");
    const double k = (p.ms - 1.0) * p.mean_snr;
    return p.m * std::log(p.m) + p.ms * std::log(k) + (p.m - 1.0) * std::log(gamma) - ln_beta(p.m, p.ms) -
           (p.m + p.ms) * std::log(p.m * gamma + k);
}

double pdf(const FadingParams& p, double gamma) { return std::exp(log_pdf(p, gamma)); }

double cdf(const FadingParams& p, double gamma) {
    p.validate();
    if (gamma < 0.0 || std::isnan(gamma))
        fail(ErrorCode::domain, "F cdf needs gamma >= 0");
    if (gamma == 0.0)
        return 0.0;
    if (std::isinf(gamma))
        return 1.0;
    const double y = gamma / p.scale();
    // I_x(m, ms) with x = y/(1+y); the complement form keeps digits when x is near 1
    const double v = y < 1.0 ? boost::math::ibeta(p.m, p.ms, y / (1.0 + y))
                             : boost::math::ibetac(p.ms, p.m, 1.0 / (1.0 + y));
    return std::clamp(v, 0.0, 1.0);
}

cplx mgf(const FadingParams& p, cplx s) {
    p.validate();
    if (!(s.real() > 0.0))
        fail(ErrorCode::domain, "F mgf needs Re s > 0");
    const double lead = std::exp(std::lgamma(p.m + p.ms) - std::lgamma(p.ms));
    return lead * tricomi_u(p.m, 1.0 - p.ms, s * p.scale());
}

double moment(const FadingParams& p, double n) {
    p.validate();
    if (!(n < p.ms) || !(n > -p.m)) {
        std::ostringstream msg;
        msg << "moment of order " << n << " needs " << -p.m << " < n < ms = " << p.ms;
        fail(ErrorCode::moment_missing, msg.str());
    }
    return std::exp(n * std::log(p.scale()) + ln_beta(p.m + n, p.ms - n) - ln_beta(p.m, p.ms));
}

double amount_of_fading(const FadingParams& p) {
    p.validate();
    if (!(p.ms > 2.0))
        fail(ErrorCode::moment_missing, "amount of fading needs ms > 2");
    return (1.0 + p.m) * (p.ms - 1.0) / (p.m * (p.ms - 2.0)) - 1.0;
}

SampleSet sample(const FadingParams& p, std::size_t count, std::uint64_t seed) {
    return sample_sum(BranchSet::iid(p, 1), count, seed);
}

} // namespace fsum::fisher_f
