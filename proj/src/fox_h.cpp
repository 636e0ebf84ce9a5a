#include "fsum/fox_h.hpp"

#include "fsum/error.hpp"
#include "fsum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gamma(c + w.zeta)^power
struct GammaTerm {
    double c = 0.0;
    std::vector<double> w;
    int power = 0;
};

struct Integrand {
    std::size_t r = 0;
    std::vector<GammaTerm> terms;
    std::vector<double> log_args;
};

std::vector<double> axis(std::size_t r, std::size_t i, double v) {
    std::vector<double> w(r, 0.0);
    w[i] = v;
    return w;
}

std::vector<double> scaled(const std::vector<double>& v, double s) {
    std::vector<double> out(v);
    for (double& x : out)
        x *= s;
    return out;
}

void add_term(std::vector<GammaTerm>& terms, double c, std::vector<double> w, int power) {
    for (auto& t : terms) {
        if (t.c == c && t.w == w) {
            t.power += power;
            return;
        }
    }
    terms.push_back({c, std::move(w), power});
}

Integrand compile(const FoxHSpec& spec) {
    spec.validate();
    Integrand f;
    f.r = spec.dims();
    const std::size_t r = f.r;
    for (std::size_t j = 0; j < spec.a.size(); ++j) {
        const auto& row = spec.a[j];
        if (j < spec.n)
            add_term(f.terms, 1.0 - row.value, row.coeffs, 1);
        else
            add_term(f.terms, row.value, scaled(row.coeffs, -1.0), -1);
    }
    for (const auto& row : spec.b)
        add_term(f.terms, 1.0 - row.value, row.coeffs, -1);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& g = spec.inner[i];
        for (std::size_t j = 0; j < g.c.size(); ++j) {
            if (j < g.n)
                add_term(f.terms, 1.0 - g.c[j].value, axis(r, i, g.c[j].coeff), 1);
            else
                add_term(f.terms, g.c[j].value, axis(r, i, -g.c[j].coeff), -1);
        }
        for (std::size_t j = 0; j < g.d.size(); ++j) {
            if (j < g.m)
                add_term(f.terms, g.d[j].value, axis(r, i, -g.d[j].coeff), 1);
            else
                add_term(f.terms, 1.0 - g.d[j].value, axis(r, i, g.d[j].coeff), -1);
        }
    }
    std::erase_if(f.terms, [](const GammaTerm& t) { return t.power == 0; });
    for (double z : spec.args)
        f.log_args.push_back(std::log(z));
    return f;
}

std::string term_label(double c, const std::vector<double>& w) {
    std::ostringstream os;
    os << "Gamma(" << c;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0)
            continue;
        os << (w[i] < 0 ? " - " : " + ");
        if (std::abs(w[i]) != 1.0)
            os << std::abs(w[i]) << "*";
        os << "zeta" << (i + 1);
    }
    os << ")";
    return os.str();
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

std::size_t nonzero_count(const std::vector<double>& w) {
    return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double v) { return v != 0.0; }));
}

// log|integrand| on the real axis
double log_abs_real(const Integrand& f, const std::vector<double>& sigma) {
    double s = dot(sigma, f.log_args);
    for (const auto& t : f.terms) {
        const double x = t.c + dot(t.w, sigma);
        if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-13) {
            if (t.power < 0)
                return -1e4; // reciprocal gamma vanishes here
            return 1e4;
        }
        s += t.power * ln_abs_gamma(x);
    }
    return s;
}

cplx log_integrand(const Integrand& f, const std::vector<cplx>& zeta) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < f.r; ++i)
        s += zeta[i] * f.log_args[i];
    for (const auto& t : f.terms) {
        cplx x = t.c;
        for (std::size_t i = 0; i < f.r; ++i)
            x += t.w[i] * zeta[i];
        s += static_cast<double>(t.power) * ln_gamma(x);
    }
    return s;
}

bool satisfied(const LinearConstraint& c, const std::vector<double>& sigma) {
    return c.slack(sigma) > 0.0;
}

std::size_t tolerance_dims_check(std::size_t r, bool allow) {
    if (r == 0)
        fail(ErrorCode::invalid_parameters, "Fox H spec with zero dimensions");
    if (r >= 4 && !allow) {
        std::ostringstream msg;
        msg << r << "-dimensional contour integral refused (limit 3; set allow_high_dims to override)";
        fail(ErrorCode::dimension_refused, msg.str());
    }
    return r;
}

// ---- planning -------------------------------------------------------------

struct Region {
    std::size_t r = 0;
    std::vector<LinearConstraint> all;      // raw constraints (poles + extra)
    std::vector<double> lo, hi;             // shrunk box
    std::vector<LinearConstraint> shrunk;   // shrunk multi-dim constraints
};

bool inside(const Region& g, const std::vector<double>& x) {
    for (std::size_t i = 0; i < g.r; ++i)
        if (!(x[i] >= g.lo[i] && x[i] <= g.hi[i]))
            return false;
    for (const auto& c : g.shrunk)
        if (c.slack(x) < 0.0)
            return false;
    return true;
}

// min and max of coeffs . x over a box
std::pair<double, double> box_range(const std::vector<double>& c, const std::vector<double>& lo,
                                    const std::vector<double>& hi) {
    double mn = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0.0)
            continue;
        const double a = c[i] * lo[i], b = c[i] * hi[i];
        mn += std::min(a, b);
        mx += std::max(a, b);
    }
    return {mn, mx};
}

constexpr double kMaxMargin = 0.5;

Region build_region(const FoxHSpec& spec, const std::vector<LinearConstraint>& extra, double margin) {
    Region g;
    g.r = spec.dims();
    const std::size_t r = g.r;
    g.all = pole_constraints(spec);
    for (const auto& c : extra) {
        if (c.coeffs.size() != r)
            fail(ErrorCode::invalid_parameters, "constraint '" + c.label + "' has wrong length");
        g.all.push_back(c);
    }

    std::vector<double> lo(r, -kInf), hi(r, kInf);
    std::vector<const LinearConstraint*> multi;
    for (const auto& c : g.all) {
        if (nonzero_count(c.coeffs) == 0) {
            if ((c.upper && !(0.0 < c.bound)) || (!c.upper && !(0.0 > c.bound)))
                fail(ErrorCode::infeasible_contour, "constant constraint violated: " + c.label);
            continue;
        }
        if (nonzero_count(c.coeffs) > 1) {
            multi.push_back(&c);
            continue;
        }
        std::size_t i = 0;
        while (c.coeffs[i] == 0.0)
            ++i;
        const double lim = c.bound / c.coeffs[i];
        const bool is_upper = (c.coeffs[i] > 0.0) == c.upper;
        if (is_upper)
            hi[i] = std::min(hi[i], lim);
        else
            lo[i] = std::max(lo[i], lim);
        if (!(lo[i] < hi[i]))
            fail(ErrorCode::infeasible_contour, "empty interval for sigma" + std::to_string(i + 1) +
                                                    " after " + c.label);
    }
    // bounded window on open sides
    constexpr double window = 4.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (std::isinf(lo[i]) && std::isinf(hi[i])) {
            lo[i] = -window / 2;
            hi[i] = window / 2;
        } else if (std::isinf(lo[i])) {
            lo[i] = hi[i] - window;
        } else if (std::isinf(hi[i])) {
            hi[i] = lo[i] + window;
        }
    }
    // tighten each coordinate by the multi-dim constraints (a few sweeps)
    for (int sweep = 0; sweep < 4; ++sweep) {
        for (const auto* c : multi) {
            for (std::size_t i = 0; i < r; ++i) {
                const double ci = c->coeffs[i];
                if (ci == 0.0)
                    continue;
                std::vector<double> rest = c->coeffs;
                rest[i] = 0.0;
                const auto [rmin, rmax] = box_range(rest, lo, hi);
                // upper: ci x < bound - rest.x  (best case rest = rmin)
                const double lim = c->upper ? (c->bound - rmin) / ci : (c->bound - rmax) / ci;
                const bool is_upper = (ci > 0.0) == c->upper;
                if (is_upper)
                    hi[i] = std::min(hi[i], lim);
                else
                    lo[i] = std::max(lo[i], lim);
                if (!(lo[i] < hi[i]))
                    fail(ErrorCode::infeasible_contour,
                         "no admissible sigma" + std::to_string(i + 1) + " under " + c->label);
            }
        }
    }
    // relative margin, capped so wide strips (large m or ms) still allow anchors near the
    // pole-free end where the integrand is smallest
    const auto pad = [margin](double width) { return std::min(margin * width, kMaxMargin); };
    g.lo.resize(r);
    g.hi.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        const double w = hi[i] - lo[i];
        g.lo[i] = lo[i] + pad(w);
        g.hi[i] = hi[i] - pad(w);
    }
    for (const auto* c : multi) {
        LinearConstraint s = *c;
        const auto [mn, mx] = box_range(c->coeffs, lo, hi);
        if (c->upper)
            s.bound = c->bound - pad(c->bound - mn);
        else
            s.bound = c->bound + pad(mx - c->bound);
        const auto [smn, smx] = box_range(s.coeffs, g.lo, g.hi);
        if ((s.upper && !(smn < s.bound)) || (!s.upper && !(smx > s.bound)))
            fail(ErrorCode::infeasible_contour, "no interior point with margin under " + c->label);
        g.shrunk.push_back(std::move(s));
    }
    return g;
}

std::vector<double> feasible_start(const Region& g) {
    std::vector<double> x(g.r);
    for (std::size_t i = 0; i < g.r; ++i)
        x[i] = 0.5 * (g.lo[i] + g.hi[i]);
    // alternating projections onto the shrunk half-spaces and box
    for (int it = 0; it < 500 && !inside(g, x); ++it) {
        for (const auto& c : g.shrunk) {
            const double s = c.slack(x);
            if (s >= 0.0)
                continue;
            const double nn = dot(c.coeffs, c.coeffs);
            const double move = (-s) * (1.0 + 1e-9) / nn;
            for (std::size_t i = 0; i < g.r; ++i)
                x[i] += (c.upper ? -1.0 : 1.0) * c.coeffs[i] * move;
        }
        for (std::size_t i = 0; i < g.r; ++i)
            x[i] = std::clamp(x[i], g.lo[i], g.hi[i]);
    }
    if (!inside(g, x))
        fail(ErrorCode::infeasible_contour, "could not find a point satisfying all contour constraints");
    return x;
}

template <class F>
std::vector<double> pattern_search(const Region& g, std::vector<double> x, F&& objective) {
    const std::size_t r = g.r;
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < r; ++i) {
        dirs.push_back(axis(r, i, 1.0));
        dirs.push_back(axis(r, i, -1.0));
        for (std::size_t k = i + 1; k < r; ++k) {
            for (double si : {1.0, -1.0})
                for (double sk : {1.0, -1.0}) {
                    auto d = axis(r, i, si);
                    d[k] = sk;
                    dirs.push_back(d);
                }
        }
    }
    double width = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        width = std::max(width, g.hi[i] - g.lo[i]);
    double step = 0.25 * width;
    double fx = objective(x);
    for (int it = 0; it < 4000 && step > 1e-3 * width; ++it) {
        bool improved = false;
        for (const auto& d : dirs) {
            std::vector<double> y(x);
            for (std::size_t i = 0; i < r; ++i)
                y[i] += step * d[i];
            if (!inside(g, y))
                continue;
            const double fy = objective(y);
            if (fy < fx - 1e-12 * std::max(1.0, std::abs(fx))) {
                x = std::move(y);
                fx = fy;
                improved = true;
                break;
            }
        }
        if (!improved)
            step *= 0.5;
    }
    return x;
}

// distance along coordinate i to the nearest raw constraint boundary
double axis_distance(const Region& g, const std::vector<double>& x, std::size_t i) {
    double d = kInf;
    for (const auto& c : g.all) {
        if (c.coeffs[i] == 0.0)
            continue;
        d = std::min(d, c.slack(x) / std::abs(c.coeffs[i]));
    }
    return d;
}

// Largest 2h for which the trapezoid error along dimension i is about exp(-lambda) relative.
double coarse_step(const Integrand& f, const Region& g, const std::vector<double>& x, std::size_t i,
                   double phi_ref, double lambda) {
    const double dist = std::min(axis_distance(g, x, i), 6.0);
    double best = 0.0;
    std::vector<double> y(x);
    for (int k = 1; k <= 19; ++k) {
        const double dp = dist * k / 20.0;
        y[i] = x[i] + dp;
        const double up = log_abs_real(f, y);
        y[i] = x[i] - dp;
        const double down = log_abs_real(f, y);
        y[i] = x[i];
        const double growth = std::max(std::max(up, down) - phi_ref, 0.0);
        best = std::max(best, kTwoPi * dp / (lambda + growth));
    }
    return best;
}

double march(const Integrand& f, const std::vector<double>& sigma, const std::vector<double>& dir,
             double threshold) {
    const std::size_t r = f.r;
    std::vector<cplx> zeta(r);
    constexpr double ds = 0.25;
    int below = 0;
    for (double s = ds; s < 500.0; s += ds) {
        for (std::size_t i = 0; i < r; ++i)
            zeta[i] = cplx(sigma[i], s * dir[i]);
        const double v = log_integrand(f, zeta).real();
        if (v < threshold) {
            if (++below >= 3)
                return s;
        } else {
            below = 0;
        }
    }
    fail(ErrorCode::no_convergence, "integrand does not decay along the contour");
}

} // namespace

void FoxHSpec::validate() const {
    const std::size_t r = dims();
    if (r == 0)
        fail(ErrorCode::invalid_parameters, "Fox H spec needs at least one argument");
    if (inner.size() != r)
        fail(ErrorCode::invalid_parameters, "inner group count differs from argument count");
    if (n > a.size())
        fail(ErrorCode::invalid_parameters, "outer split n exceeds the a-row count");
    for (const auto& row : a)
        if (row.coeffs.size() != r)
            fail(ErrorCode::invalid_parameters, "outer a-row length differs from dimension");
    for (const auto& row : b)
        if (row.coeffs.size() != r)
            fail(ErrorCode::invalid_parameters, "outer b-row length differs from dimension");
    for (const auto& g : inner) {
        if (g.n > g.c.size() || g.m > g.d.size())
            fail(ErrorCode::invalid_parameters, "inner split exceeds row count");
        for (const auto& e : g.c)
            if (!(e.coeff > 0.0))
                fail(ErrorCode::invalid_parameters, "inner coefficients must be positive");
        for (const auto& e : g.d)
            if (!(e.coeff > 0.0))
                fail(ErrorCode::invalid_parameters, "inner coefficients must be positive");
    }
    for (double z : args)
        if (!(z > 0.0) || !std::isfinite(z))
            fail(ErrorCode::invalid_parameters, "Fox H arguments must be finite and positive");
}

double LinearConstraint::slack(const std::vector<double>& sigma) const {
    const double v = dot(coeffs, sigma);
    return upper ? bound - v : v - bound;
}

double ContourPlan::total_nodes() const {
    double n = 1.0;
    for (int k : nodes)
        n *= k;
    return n;
}

std::string ContourPlan::describe() const {
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (i)
            os << "; ";
        os << "sigma" << (i + 1) << "=" << anchors[i] << " T=" << half_widths[i] << " N=" << nodes[i];
    }
    return os.str();
}

double default_tolerance(std::size_t dims) { return dims <= 1 ? 1e-6 : 1e-4; }

std::vector<LinearConstraint> pole_constraints(const FoxHSpec& spec) {
    // poles that survive cancellation against identical denominator gammas
    const Integrand f = compile(spec);
    std::vector<LinearConstraint> out;
    for (const auto& t : f.terms) {
        if (t.power <= 0)
            continue;
        LinearConstraint c;
        c.coeffs = t.w;
        c.bound = -t.c;
        c.upper = false;
        c.label = term_label(t.c, t.w) + " poles";
        out.push_back(std::move(c));
    }
    return out;
}

cplx fox_h_log_integrand(const FoxHSpec& spec, const std::vector<cplx>& zeta) {
    const Integrand f = compile(spec);
    if (zeta.size() != f.r)
        fail(ErrorCode::invalid_parameters, "zeta has wrong dimension");
    return log_integrand(f, zeta);
}

ContourPlan plan_contours(const FoxHSpec& spec, const std::vector<LinearConstraint>& extra,
                          const PlanOptions& opts) {
    const Integrand f = compile(spec);
    const std::size_t r = tolerance_dims_check(f.r, opts.allow_high_dims);
    const Region g = build_region(spec, extra, opts.margin);
    const double tol = opts.tolerance > 0.0 ? opts.tolerance : default_tolerance(r);
    const double lambda = std::log(1.0 / tol) + 2.0;

    std::vector<double> x = feasible_start(g);
    auto phi = [&](const std::vector<double>& s) { return log_abs_real(f, s); };
    const std::vector<double> xmin = pattern_search(g, x, phi);
    const double phi_ref = phi(xmin);

    auto min_step = [&](const std::vector<double>& s) {
        double h = kInf;
        for (std::size_t i = 0; i < r; ++i)
            h = std::min(h, coarse_step(f, g, s, i, phi_ref, lambda));
        return h;
    };
    if (opts.placement == Placement::magnitude) {
        x = xmin;
    } else if (opts.placement == Placement::balanced) {
        // start from whichever of the midpoint and the magnitude minimum is cheaper
        if (min_step(xmin) > min_step(x))
            x = xmin;
        x = pattern_search(g, x, [&](const std::vector<double>& s) { return -min_step(s); });
    }
    const double h = 0.5 * min_step(x);
    if (!(h > 0.0) || !std::isfinite(h))
        fail(ErrorCode::infeasible_contour, "contour anchor too close to a pole");

    // truncation from the endpoint-decay rule along axes and diagonals
    const double peak = phi(x);
    const double threshold = std::min(peak, phi_ref) + std::log(opts.decay);
    std::vector<double> T(r, 0.0);
    std::vector<int> dir(r, -1);
    for (;;) {
        std::size_t k = 0;
        while (k < r && dir[k] == 1) {
            dir[k] = -1;
            ++k;
        }
        if (k == r)
            break;
        ++dir[k];
        // canonical representative of +-dir: first nonzero entry positive
        auto first = std::find_if(dir.begin(), dir.end(), [](int v) { return v != 0; });
        if (first == dir.end() || *first < 0)
            continue;
        const std::vector<double> d(dir.begin(), dir.end());
        const double s = march(f, x, d, threshold);
        for (std::size_t i = 0; i < r; ++i)
            if (dir[i] != 0)
                T[i] = std::max(T[i], s);
    }

    ContourPlan plan;
    plan.anchors = x;
    plan.constraints = extra;
    for (std::size_t i = 0; i < r; ++i) {
        int n = 2 * static_cast<int>(std::ceil(T[i] / h)) + 1;
        n = std::max(n, opts.min_nodes | 1);
        plan.nodes.push_back(n);
        plan.half_widths.push_back(h * (n - 1) / 2.0);
    }
    if (plan.total_nodes() > opts.node_budget) {
        std::ostringstream msg;
        msg << "plan needs " << plan.total_nodes() << " nodes (budget " << opts.node_budget
            << "): " << plan.describe();
        fail(ErrorCode::budget_exceeded, msg.str());
    }
    return plan;
}

EvalResult fox_h(const FoxHSpec& spec, const ContourPlan& plan, const EvalOptions& opts) {
    const Integrand f = compile(spec);
    const std::size_t r = tolerance_dims_check(f.r, opts.allow_high_dims);
    if (plan.anchors.size() != r || plan.half_widths.size() != r || plan.nodes.size() != r)
        fail(ErrorCode::invalid_parameters, "contour plan dimension differs from spec");
    for (std::size_t i = 0; i < r; ++i)
        if (plan.nodes[i] < 3 || plan.nodes[i] % 2 == 0 || !(plan.half_widths[i] > 0.0))
            fail(ErrorCode::invalid_parameters, "contour plan needs odd node counts >= 3 and T > 0");
    for (const auto& c : pole_constraints(spec))
        if (!satisfied(c, plan.anchors))
            fail(ErrorCode::infeasible_contour, "anchor violates " + c.label + ": " + plan.describe());
    for (const auto& c : plan.constraints)
        if (!satisfied(c, plan.anchors))
            fail(ErrorCode::infeasible_contour, "anchor violates " + c.label + ": " + plan.describe());
    for (const auto& t : f.terms) {
        const double x = t.c + dot(t.w, plan.anchors);
        if (x <= 0.0 && std::abs(x - std::round(x)) <= 1e-6)
            fail(ErrorCode::gamma_pole, "contour passes through a pole of " + term_label(t.c, t.w));
    }

    std::vector<double> h(r);
    std::vector<int> K(r);
    for (std::size_t i = 0; i < r; ++i) {
        h[i] = plan.step(i);
        K[i] = (plan.nodes[i] - 1) / 2;
    }
    bool common_step = true;
    for (std::size_t i = 1; i < r; ++i)
        if (std::abs(h[i] - h[0]) > 1e-12 * h[0])
            common_step = false;

    // per-dimension factors
    std::vector<std::vector<cplx>> P(r);
    for (std::size_t i = 0; i < r; ++i)
        P[i].assign(plan.nodes[i], cplx(0.0));
    struct Lattice {
        std::vector<int> w;
        int jmin = 0;
        std::vector<cplx> table;
    };
    std::vector<Lattice> lattice;
    std::vector<const GammaTerm*> generic;
    for (const auto& t : f.terms) {
        if (nonzero_count(t.w) == 1) {
            std::size_t i = 0;
            while (t.w[i] == 0.0)
                ++i;
            for (int k = 0; k < plan.nodes[i]; ++k) {
                const cplx zeta(plan.anchors[i], (k - K[i]) * h[i]);
                P[i][k] += static_cast<double>(t.power) * ln_gamma(t.c + t.w[i] * zeta);
            }
            continue;
        }
        bool integral = common_step && opts.use_lattice;
        for (double w : t.w)
            integral = integral && w == std::round(w);
        if (!integral) {
            generic.push_back(&t);
            continue;
        }
        Lattice L;
        int jmin = 0, jmax = 0;
        for (std::size_t i = 0; i < r; ++i) {
            const int w = static_cast<int>(t.w[i]);
            L.w.push_back(w);
            jmin -= std::abs(w) * K[i];
            jmax += std::abs(w) * K[i];
        }
        L.jmin = jmin;
        const double re = t.c + dot(t.w, plan.anchors);
        for (int j = jmin; j <= jmax; ++j)
            L.table.push_back(static_cast<double>(t.power) * ln_gamma(cplx(re, j * h[0])));
        lattice.push_back(std::move(L));
    }
    for (std::size_t i = 0; i < r; ++i)
        for (int k = 0; k < plan.nodes[i]; ++k)
            P[i][k] += cplx(plan.anchors[i], (k - K[i]) * h[i]) * f.log_args[i];

    // nodes this far below the central node cannot move the sum
    double skip_below = 0.0;
    {
        cplx centre = 0.0;
        for (std::size_t i = 0; i < r; ++i)
            centre += P[i][K[i]];
        for (const auto& L : lattice)
            centre += L.table[-L.jmin];
        std::vector<cplx> zeta(r);
        for (std::size_t i = 0; i < r; ++i)
            zeta[i] = plan.anchors[i];
        for (const auto* t : generic) {
            cplx x = t->c;
            for (std::size_t i = 0; i < r; ++i)
                x += t->w[i] * zeta[i];
            centre += static_cast<double>(t->power) * ln_gamma(x);
        }
        skip_below = centre.real() - 46.0;
    }

    struct Partial {
        cplx full = 0.0;
        cplx half = 0.0;
        cplx quarter = 0.0;
        double mass = 0.0;
    };
    // r == 1 runs as a single task; otherwise tasks split the first dimension
    const std::size_t outer = r == 1 ? 1 : static_cast<std::size_t>(plan.nodes[0]);
    std::vector<Partial> partial(outer);
    const std::size_t last = r - 1;

    parallel_for(outer, opts.threads, [&](std::size_t k0) {
        Partial acc;
        std::vector<int> idx(r, 0);
        idx[0] = static_cast<int>(k0);
        std::vector<cplx> zeta(r);
        // odometer over dims 1..r-2, innermost loop over dim r-1
        for (;;) {
            cplx base = 0.0;
            bool even = true, fourth = true;
            for (std::size_t i = 0; i < last; ++i) {
                base += P[i][idx[i]];
                even = even && ((idx[i] - K[i]) % 2 == 0);
                fourth = fourth && ((idx[i] - K[i]) % 4 == 0);
            }
            std::vector<int> off(lattice.size());
            for (std::size_t q = 0; q < lattice.size(); ++q) {
                int j = 0;
                for (std::size_t i = 0; i < last; ++i)
                    j += lattice[q].w[i] * (idx[i] - K[i]);
                off[q] = j - lattice[q].jmin;
            }
            const auto& Pl = P[last];
            const int Kl = K[last];
            const int Nl = plan.nodes[last];
            for (int k = 0; k < Nl; ++k) {
                cplx lv = base + Pl[k];
                const int tk = k - Kl;
                for (std::size_t q = 0; q < lattice.size(); ++q)
                    lv += lattice[q].table[off[q] + lattice[q].w[last] * tk];
                if (!generic.empty()) {
                    idx[last] = k;
                    for (std::size_t i = 0; i < r; ++i)
                        zeta[i] = cplx(plan.anchors[i], (idx[i] - K[i]) * h[i]);
                    for (const auto* t : generic) {
                        cplx x = t->c;
                        for (std::size_t i = 0; i < r; ++i)
                            x += t->w[i] * zeta[i];
                        lv += static_cast<double>(t->power) * ln_gamma(x);
                    }
                }
                if (lv.real() < skip_below)
                    continue;
                const double mag = std::exp(lv.real());
                const cplx v(mag * std::cos(lv.imag()), mag * std::sin(lv.imag()));
                acc.full += v;
                acc.mass += mag;
                if (even && (tk % 2 == 0))
                    acc.half += v;
                if (fourth && (tk % 4 == 0))
                    acc.quarter += v;
            }
            bool done = true;
            for (std::size_t i = last; i-- > 1;) {
                if (++idx[i] < plan.nodes[i]) {
                    done = false;
                    break;
                }
                idx[i] = 0;
            }
            if (done)
                break;
        }
        partial[k0] = acc;
    });

    Partial total;
    for (const auto& p : partial) {
        total.full += p.full;
        total.half += p.half;
        total.quarter += p.quarter;
        total.mass += p.mass;
    }
    double w = 1.0;
    for (std::size_t i = 0; i < r; ++i)
        w *= h[i] / kTwoPi;
    const double w_half = w * std::pow(2.0, static_cast<double>(r));

    EvalResult res;
    res.value = total.full.real() * w;
    res.imag_part = total.full.imag() * w;
    res.abs_mass = total.mass * w;
    res.nodes_used = static_cast<long long>(plan.total_nodes());
    const double half = total.half.real() * w_half;
    const double quarter = total.quarter.real() * w_half * std::pow(2.0, static_cast<double>(r));
    // |I_h - I_2h| bounds the coarser sum; with a clear geometric drop from 4h to 2h one more
    // ratio is applied (the true trapezoid gain is the ratio squared)
    double e2 = std::abs(res.value - half);
    const double e4 = std::abs(res.value - quarter);
    if (e4 > 4.0 * e2)
        e2 *= e2 / e4;
    res.abs_error_estimate = e2 + 64.0 * std::numeric_limits<double>::epsilon() * res.abs_mass;
    if (!std::isfinite(res.value) || !std::isfinite(res.abs_error_estimate))
        fail(ErrorCode::no_convergence, "non-finite Fox H quadrature: " + plan.describe());

    const double tol = opts.tolerance > 0.0 ? opts.tolerance : default_tolerance(r);
    if (opts.check_tolerance && res.abs_error_estimate > tol * std::abs(res.value) &&
        res.abs_error_estimate > 1e-13 * res.abs_mass) {
        std::ostringstream msg;
        msg << "value " << res.value << " with error estimate " << res.abs_error_estimate
            << " misses relative tolerance " << tol << " (" << plan.describe() << ")";
        fail(ErrorCode::tolerance_unmet, msg.str());
    }
    return res;
}

namespace {

struct AutoResult {
    EvalResult res;
    ContourPlan plan;
    bool relative_ok = false;
};

AutoResult refine(const FoxHSpec& spec, ContourPlan plan, const PlanOptions& plan_opts, const EvalOptions& loose,
                  double tol) {
    AutoResult out;
    for (int attempt = 0;; ++attempt) {
        out.res = fox_h(spec, plan, loose);
        out.relative_ok = out.res.abs_error_estimate <= tol * std::abs(out.res.value);
        const bool ok = out.relative_ok || out.res.abs_error_estimate <= 1e-13 * out.res.abs_mass;
        if (ok || attempt == 2)
            break;
        ContourPlan finer = plan;
        for (auto& n : finer.nodes)
            n = 2 * n - 1;
        if (finer.total_nodes() > plan_opts.node_budget)
            break;
        plan = std::move(finer);
    }
    out.plan = std::move(plan);
    return out;
}

} // namespace

EvalResult fox_h_auto(const FoxHSpec& spec, const std::vector<LinearConstraint>& extra,
                      const PlanOptions& plan_opts, const EvalOptions& eval_opts, ContourPlan* used_plan) {
    const double tol = eval_opts.tolerance > 0.0 ? eval_opts.tolerance : default_tolerance(spec.dims());
    EvalOptions loose = eval_opts;
    loose.check_tolerance = false;
    AutoResult best = refine(spec, plan_contours(spec, extra, plan_opts), plan_opts, loose, tol);
    if (!best.relative_ok && plan_opts.placement == Placement::balanced) {
        PlanOptions alt = plan_opts;
        alt.placement = Placement::magnitude;
        try {
            AutoResult other = refine(spec, plan_contours(spec, extra, alt), alt, loose, tol);
            if (other.res.abs_error_estimate < best.res.abs_error_estimate)
                best = std::move(other);
        } catch (const Error&) {
            // keep the balanced result; its own checks below decide
        }
    }
    const EvalResult& res = best.res;
    if (used_plan)
        *used_plan = best.plan;
    if (eval_opts.check_tolerance && res.abs_error_estimate > tol * std::abs(res.value) &&
        res.abs_error_estimate > 1e-13 * res.abs_mass) {
        std::ostringstream msg;
        msg << "value " << res.value << " with error estimate " << res.abs_error_estimate
            << " misses relative tolerance " << tol << " (" << best.plan.describe() << ")";
        fail(ErrorCode::tolerance_unmet, msg.str());
    }
    return res;
}

} // namespace fsum
