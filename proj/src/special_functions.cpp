#include "fsum/special_functions.hpp"

#include "fsum/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fsum {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2k} / (2k (2k-1)) for k = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

cplx stirling(cplx z) {
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx corr = 0.0;
    cplx p = inv;
    for (double c : kStirling) {
        corr += c * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + corr;
}

bool near_nonpositive_integer(double x, double tol) {
    return x < 0.5 && std::abs(x - std::round(x)) < tol;
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::round(x);
}

constexpr int kSeriesCap = 2'000'000;

double gauss_series(double a, double b, double c, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < kSeriesCap; ++n) {
        const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
        term *= ratio;
        sum += term;
        if (term == 0.0)
            return sum;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && std::abs(ratio) < 1.0)
            return sum;
    }
    std::ostringstream msg;
    msg << "2F1(" << a << "," << b << ";" << c << ";" << x << ") series did not converge in "
        << kSeriesCap << " terms";
    fail(ErrorCode::no_convergence, msg.str());
}

// Gamma(p1) Gamma(p2) / (Gamma(q1) Gamma(q2)); reciprocal gammas at poles are zero.
double gamma_ratio(double p1, double p2, double q1, double q2) {
    if (is_nonpositive_integer(q1) || is_nonpositive_integer(q2))
        return 0.0;
    int s1 = 1, s2 = 1, s3 = 1, s4 = 1;
    const double lg = ln_abs_gamma(p1, &s1) + ln_abs_gamma(p2, &s2) - ln_abs_gamma(q1, &s3) -
                      ln_abs_gamma(q2, &s4);
    return s1 * s2 * s3 * s4 * std::exp(lg);
}

// 2F1 on 0 <= w < 1.
double gauss_unit(double a, double b, double c, double w) {
    if (w <= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b))
        return gauss_series(a, b, c, w);
    const double d = c - a - b;
    if (std::abs(d - std::round(d)) < 1e-6)
        return gauss_series(a, b, c, w);
    const double v = 1.0 - w;
    double out = 0.0;
    const double g1 = gamma_ratio(c, d, c - a, c - b);
    if (g1 != 0.0)
        out += g1 * gauss_series(a, b, 1.0 - d, v);
    const double g2 = gamma_ratio(c, -d, a, b);
    if (g2 != 0.0)
        out += g2 * std::pow(v, d) * gauss_series(c - a, c - b, d + 1.0, v);
    return out;
}

} // namespace

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::gamma_pole: return "gamma pole";
    case ErrorCode::no_convergence: return "no convergence";
    case ErrorCode::infeasible_contour: return "infeasible contour";
    case ErrorCode::dimension_refused: return "dimension refused";
    case ErrorCode::tolerance_unmet: return "tolerance unmet";
    case ErrorCode::budget_exceeded: return "node budget exceeded";
    case ErrorCode::moment_missing: return "moment does not exist";
    case ErrorCode::invalid_parameters: return "invalid parameters";
    case ErrorCode::empty_sample: return "empty sample";
    case ErrorCode::divergent: return "divergent";
    case ErrorCode::no_sign_change: return "no sign change";
    }
    return "error";
}

cplx ln_gamma(cplx z) {
    const double x = z.real();
    if (std::abs(z.imag()) < 1e-12 && near_nonpositive_integer(x, 1e-12)) {
        std::ostringstream msg;
        msg << "ln_gamma at " << z;
        fail(ErrorCode::gamma_pole, msg.str());
    }
    if (x >= 12.0 || (x >= 0.0 && std::abs(z) >= 12.0))
        return stirling(z);

    // lnG(z) = lnG(z+n) - sum ln(z+k)
    const int n = static_cast<int>(std::ceil(12.0 - x));
    cplx shift = 0.0;
    for (int k = 0; k < n; ++k)
        shift += std::log(z + static_cast<double>(k));
    return stirling(z + static_cast<double>(n)) - shift;
}

double ln_abs_gamma(double x, int* sign) {
    if (is_nonpositive_integer(x)) {
        std::ostringstream msg;
        msg << "ln_abs_gamma at " << x;
        fail(ErrorCode::gamma_pole, msg.str());
    }
    int s = 1;
    const double v = boost::math::lgamma(x, &s);
    if (sign)
        *sign = s;
    return v;
}

double gauss_2f1(double a, double b, double c, double x) {
    if (is_nonpositive_integer(c))
        fail(ErrorCode::domain, "2F1 with c a nonpositive integer");
    if (!(x < 1.0))
        fail(ErrorCode::domain, "2F1 requires x < 1");
    if (x == 0.0)
        return 1.0;
    if (x > 0.0)
        return gauss_unit(a, b, c, x);
    // Pfaff: 2F1(a,b;c;x) = (1-x)^-a 2F1(a, c-b; c; x/(x-1))
    const double w = x / (x - 1.0);
    return std::pow(1.0 - x, -a) * gauss_unit(a, c - b, c, w);
}

cplx tricomi_u(double a, double b, cplx x) {
    if (!(a > 0.0))
        fail(ErrorCode::domain, "tricomi_u requires a > 0");
    if (!(x.real() > 0.0))
        fail(ErrorCode::domain, "tricomi_u requires Re x > 0");

    // rotate t = u e^{-i arg x}/|x| so the exponential is real and non-oscillating
    const double r = std::abs(x);
    const double theta = std::arg(x);
    const cplx rot = std::polar(1.0 / r, -theta);
    const double p = b - a - 1.0;
    auto f = [&](double u) -> cplx {
        if (u == 0.0)
            return 0.0;
        // one exponent: the power factor alone overflows at the far nodes when p > 0
        return std::exp(-u + (a - 1.0) * std::log(u) + p * std::log(1.0 + u * rot));
    };

    static thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    const cplx val = integrator.integrate(f, 1e-13, &err, &l1);
    if (!(err <= 1e-9 * std::max(std::abs(val), 1e-300)) || !std::isfinite(std::abs(val))) {
        std::ostringstream msg;
        msg << "tricomi_u(" << a << "," << b << "," << x << ") quadrature error " << err;
        fail(ErrorCode::no_convergence, msg.str());
    }
    const cplx scale = std::exp(cplx(-a * std::log(r), -a * theta) - std::lgamma(a));
    return scale * val;
}

} // namespace fsum
