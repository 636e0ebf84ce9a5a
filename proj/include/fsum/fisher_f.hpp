#pragma once

#include "fsum/fading.hpp"
#include "fsum/sample_set.hpp"
#include "fsum/special_functions.hpp"

#include <cstdint>

namespace fsum::fisher_f {

double pdf(const FadingParams& p, double gamma);
double log_pdf(const FadingParams& p, double gamma);
double cdf(const FadingParams& p, double gamma);
// E[exp(-s gamma)], Re s > 0
cplx mgf(const FadingParams& p, cplx s);
// E[gamma^n] for real n with -m < n < ms
double moment(const FadingParams& p, double n);
double amount_of_fading(const FadingParams& p);
SampleSet sample(const FadingParams& p, std::size_t count, std::uint64_t seed);

} // namespace fsum::fisher_f
