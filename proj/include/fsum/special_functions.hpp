#pragma once

#include <complex>

namespace fsum {

using cplx = std::complex<double>;

// Continuous log-gamma (same branch as scipy.special.loggamma).
cplx ln_gamma(cplx z);

// 2F1(a,b;c;x) for real arguments, x < 1.
double gauss_2f1(double a, double b, double c, double x);

// Tricomi U(a,b,x), a > 0, Re x > 0.
cplx tricomi_u(double a, double b, cplx x);

// log|Gamma(x)| for real x away from poles, with the sign of Gamma(x) in *sign.
double ln_abs_gamma(double x, int* sign = nullptr);

} // namespace fsum
