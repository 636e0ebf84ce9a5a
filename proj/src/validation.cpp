#include "fsum/validation.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/sum_dist.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace fsum {

namespace {

using Row = std::vector<std::optional<double>>;

Table make_table(std::initializer_list<const char*> cols) {
    Table t;
    for (const char* c : cols)
        t.columns.emplace_back(c);
    return t;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(double v) { return format_cell(v); }

struct Verdict {
    bool pass = false;
    std::string detail;
    Table artifact;
};

// ---------------------------------------------------------------- 1
Verdict single_branch() {
    Verdict out;
    out.artifact = make_table({"m", "ms", "worst_pdf_rel", "worst_cdf_rel"});
    double worst = 0.0;
    for (double m : {0.6, 1.5, 4.0})
        for (double ms : {1.8, 3.5, 8.0}) {
            const FadingParams p{m, ms, 1.0};
            const BranchSet b = BranchSet::iid(p, 1);
            double wp = 0.0, wc = 0.0;
            for (int i = 0; i < 50; ++i) {
                const double z = std::pow(10.0, -2.0 + 4.0 * i / 49.0);
                wp = std::max(wp, rel_diff(sum_pdf(b, z), fisher_f::pdf(p, z)));
                wc = std::max(wc, rel_diff(sum_cdf(b, z), fisher_f::cdf(p, z)));
            }
            out.artifact.rows.push_back({m, ms, wp, wc});
            worst = std::max({worst, wp, wc});
        }
    out.pass = worst < 1e-6;
    out.detail = "worst relative error " + fmt(worst) + " over 9 combos x 50 points (limit 1e-6)";
    return out;
}

// ---------------------------------------------------------------- 2
std::vector<BranchSet> cross_oracle_sets() {
    return {
        BranchSet::iid({2.0, 4.0, 1.0}, 2),
        BranchSet({{1.5, 5.0, 1.0}, {3.0, 3.5, 2.0}}),
        BranchSet::iid({2.0, 4.0, 1.0}, 3),
        BranchSet({{1.2, 6.0, 0.5}, {2.5, 4.0, 1.0}, {4.0, 8.0, 2.0}}),
    };
}

Verdict cross_oracle(std::uint64_t seed) {
    Verdict out;
    out.artifact = make_table({"set", "L", "z", "cdf_exact", "cdf_laplace", "cdf_empirical"});
    const auto sets = cross_oracle_sets();
    double worst = 0.0;
    std::string where;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const BranchSet& b = sets[k];
        const SampleSet s = sample_sum(b, 100000, seed + k);
        for (int i = 0; i < 20; ++i) {
            const double q = 0.02 + 0.96 * i / 19.0;
            const double z = s.draws[static_cast<std::size_t>(q * (s.count() - 1))];
            const double fe = sum_cdf(b, z);
            const double fl = laplace_inversion_cdf(b, z);
            const double fm = empirical_cdf(s, z);
            const double d = std::max({std::abs(fe - fl), std::abs(fe - fm), std::abs(fl - fm)});
            if (d > worst) {
                worst = d;
                where = "set " + std::to_string(k + 1) + " (L=" + std::to_string(b.size()) + ") z=" + fmt(z);
            }
            out.artifact.rows.push_back({double(k + 1), double(b.size()), z, fe, fl, fm});
        }
    }
    out.pass = worst < 5e-3;
    out.detail = "max CDF discrepancy " + fmt(worst) + " at " + where + " (limit 5e-3)";
    return out;
}

// ---------------------------------------------------------------- 3
Verdict ks_family(std::uint64_t seed) {
    Verdict out;
    out.artifact = make_table({"m", "ms", "epsilon", "distance", "T_seed1", "T_seed2", "T_seed3", "T_seed4",
                               "T_seed5", "T_max", "seeds_passed"});
    const double mean = db_to_linear(1.0);
    const double crit = ks_critical(10000, 0.05);
    int points = 0, passed = 0;
    EpsilonOptions eo;
    eo.z_points = 200;
    for (double m : {1.5, 2.0, 3.0, 5.0})
        for (double ms : {4.0, 6.0, 10.0}) {
            const BranchSet b = BranchSet::iid({m, ms, mean}, 2);
            const EpsilonFit fit = optimize_epsilon(b, [&](double z) { return sum_cdf(b, z); }, eo);
            Row row{m, ms, fit.epsilon, fit.report.statistic};
            int ok = 0;
            for (std::uint64_t k = 0; k < 5; ++k) {
                const SampleSet s = sample_sum(b, 10000, seed + 1000 * k);
                const KSReport r = ks_test([&](double z) { return fisher_f::cdf(fit.params, z); }, s, 0.05);
                row.push_back(r.statistic);
                ok += r.pass ? 1 : 0;
            }
            row.push_back(crit);
            row.push_back(double(ok));
            out.artifact.rows.push_back(row);
            ++points;
            // a grid point passes when most seeds accept
            if (ok >= 3)
                ++passed;
        }
    const double frac = double(passed) / points;
    out.pass = frac >= 0.95;
    out.detail = std::to_string(passed) + "/" + std::to_string(points) + " grid points accepted (T_max " +
                 fmt(crit) + ", need 95%)";
    return out;
}

// ---------------------------------------------------------------- 4
Table moment_table() {
    Table t = make_table({"L", "order", "sum_moment", "matched_moment", "rel_diff"});
    const std::vector<BranchSet> sets{
        BranchSet({{2.0, 4.0, 1.0}, {3.5, 6.0, 2.0}}),
        BranchSet({{1.5, 5.0, 0.5}, {2.0, 7.0, 1.0}, {4.0, 4.5, 3.0}}),
        BranchSet({{1.2, 4.0, 1.0}, {2.0, 5.0, 2.0}, {3.0, 6.0, 0.5}, {5.0, 9.0, 1.5}, {0.8, 12.0, 1.0}}),
    };
    for (const auto& b : sets) {
        const FadingParams f = match_moments(b, 0.0);
        const auto raw = sum_raw_moments(b, 3);
        for (int k = 1; k <= 3; ++k) {
            const double mm = fisher_f::moment(f, k);
            t.rows.push_back({double(b.size()), double(k), raw[k], mm, rel_diff(mm, raw[k])});
        }
    }
    return t;
}

Verdict moments() {
    Verdict out;
    out.artifact = moment_table();
    double worst = 0.0;
    for (std::size_t i = 0; i < out.artifact.rows.size(); ++i)
        worst = std::max(worst, *out.artifact.at(i, "rel_diff"));
    out.pass = worst < 1e-9;
    out.detail = "worst relative moment error " + fmt(worst) + " (limit 1e-9)";
    return out;
}

// ---------------------------------------------------------------- 5
Verdict op_slope() {
    Verdict out;
    out.artifact = make_table({"L", "snr_db", "op_exact", "op_asym", "slope", "expected_slope"});
    const std::vector<double> db{30.0, 32.5, 35.0, 37.5, 40.0};
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t L : {1u, 2u, 3u}) {
        std::vector<double> y, asym;
        for (double d : db) {
            const BranchSet b = BranchSet::iid({1.5, 5.0, db_to_linear(d)}, L);
            y.push_back(std::log10(sum_cdf(b, 1.0)));
            asym.push_back(sum_cdf_asymptotic(b, 1.0));
        }
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < db.size(); ++i) {
            mx += db[i] / db.size();
            my += y[i] / db.size();
        }
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < db.size(); ++i) {
            sxy += (db[i] - mx) * (y[i] - my);
            sxx += (db[i] - mx) * (db[i] - mx);
        }
        const double slope = sxy / sxx;
        const double expected = -1.5 * L / 10.0;
        const double dev = std::abs(slope / expected - 1.0);
        ok = ok && dev < 0.05;
        detail << (L > 1 ? "; " : "") << "L=" << L << " slope " << fmt(slope) << " vs " << fmt(expected);
        for (std::size_t i = 0; i < db.size(); ++i)
            out.artifact.rows.push_back({double(L), db[i], std::pow(10.0, y[i]), asym[i], slope, expected});
    }
    out.pass = ok;
    out.detail = detail.str() + " (within 5%)";
    return out;
}

// ---------------------------------------------------------------- 6
Verdict ordering(std::uint64_t seed) {
    Verdict out;
    const SweepConfig cfg = capacity_comparison_config(seed);
    out.artifact = run_sweep(cfg);
    const Table& t = out.artifact;
    std::vector<std::string> bad;
    auto note = [&](const std::string& s) {
        if (bad.size() < 4)
            bad.push_back(s);
        else if (bad.size() == 4)
            bad.push_back("...");
    };
    int violations = 0;
    for (Method m : cfg.methods) {
        const std::string tag = short_name(m);
        auto get = [&](std::size_t r, const std::string& metric) { return t.at(r, metric + "_" + tag); };
        auto err = [&](std::size_t r, const std::string& metric) {
            return t.at(r, metric + "_" + tag + "_err").value_or(0.0);
        };
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double db = *t.at(r, "snr_db");
            const auto ora = get(r, "ora"), opra = get(r, "opra"), g0 = t.at(r, "opra_" + tag + "_gamma0");
            const double awgn = *t.at(r, "awgn");
            const std::string where = tag + " @" + fmt(db) + " dB: ";
            if (!ora || !opra || !g0) {
                ++violations;
                note(where + "missing cell");
                continue;
            }
            const double slack = err(r, "ora") + err(r, "opra") + 1e-12;
            const double gap = *opra - *ora;
            if (gap < -slack) {
                ++violations;
                note(where + "OPRA-ORA=" + fmt(gap));
            }
            if (*ora > awgn + err(r, "ora")) {
                ++violations;
                note(where + "ORA>AWGN");
            }
            if (gap > std::min(*opra, -std::log2(*g0)) + slack) {
                ++violations;
                note(where + "OPRA-ORA above min(OPRA, -log2 g0)");
            }
        }
        // high-SNR convergence of the paired strategies
        std::vector<double> dtc, dpo;
        for (double db : {10.0, 20.0, 30.0}) {
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                if (std::abs(*t.at(r, "snr_db") - db) > 1e-9)
                    continue;
                const auto c = get(r, "cifr"), ti = get(r, "tifr"), o = get(r, "ora"), p = get(r, "opra");
                if (c && ti && o && p) {
                    dtc.push_back(std::abs(*ti - *c));
                    dpo.push_back(std::abs(*p - *o));
                }
            }
        }
        if (dtc.size() != 3) {
            ++violations;
            note(tag + ": gap rows missing");
            continue;
        }
        for (int i = 0; i < 2; ++i) {
            if (dtc[i + 1] > dtc[i]) {
                ++violations;
                note(tag + ": |TIFR-CIFR| grows " + fmt(dtc[i]) + " -> " + fmt(dtc[i + 1]));
            }
            if (dpo[i + 1] > dpo[i]) {
                ++violations;
                note(tag + ": |OPRA-ORA| grows " + fmt(dpo[i]) + " -> " + fmt(dpo[i + 1]));
            }
        }
    }
    out.pass = violations == 0;
    std::ostringstream d;
    d << violations << " violations over " << t.rows.size() << " points x " << cfg.methods.size() << " methods";
    for (const auto& b : bad)
        d << "; " << b;
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- 7
Verdict gamma0_solver() {
    Verdict out;
    out.artifact = make_table({"L", "snr_db", "gamma0", "residual", "iterations"});
    struct Case {
        std::size_t L;
        double m, ms, db;
    };
    const std::vector<Case> cases{{1, 2.5, 4.5, 10.0}, {2, 2.5, 4.5, 0.0}, {2, 2.5, 4.5, 10.0},
                                  {2, 2.5, 4.5, 20.0}, {3, 2.0, 5.0, 5.0}};
    bool ok = true;
    double worst = 0.0;
    int most = 0;
    for (const auto& c : cases) {
        MetricRequest req;
        req.branches = BranchSet::iid({c.m, c.ms, db_to_linear(c.db)}, c.L);
        req.method = Method::exact_h;
        const Gamma0Result g = solve_gamma0(req);
        const double res = gamma0_residual(req, g.gamma0);
        worst = std::max(worst, std::abs(res));
        most = std::max(most, g.iterations);
        ok = ok && std::abs(res) < 1e-6 && g.gamma0 > 0.0 && g.gamma0 <= 1.0 && g.iterations <= 40;
        out.artifact.rows.push_back({double(c.L), c.db, g.gamma0, res, double(g.iterations)});
    }
    out.pass = ok;
    out.detail = "worst |residual| " + fmt(worst) + ", at most " + std::to_string(most) +
                 " bisection steps over " + std::to_string(cases.size()) + " cases";
    return out;
}

// ---------------------------------------------------------------- 8
Table tifr_limit_table() {
    Table t = make_table({"cutoff", "tifr", "cifr", "abs_diff"});
    MetricRequest req;
    req.branches = BranchSet::iid({2.5, 4.5, db_to_linear(10.0)}, 2);
    req.method = Method::exact_h;
    req.cutoff = 1e-6;
    const double tifr = capacity_tifr(req).value;
    const double cifr = capacity_cifr(req).value;
    t.rows.push_back({req.cutoff, tifr, cifr, std::abs(tifr - cifr)});
    return t;
}

Verdict tifr_limit() {
    Verdict out;
    out.artifact = tifr_limit_table();
    const double d = *out.artifact.at(0, "abs_diff");
    out.pass = d < 1e-3;
    out.detail = "|C_TIFR(1e-6) - C_CIFR| = " + fmt(d) + " bit/s/Hz (limit 1e-3)";
    return out;
}

// ---------------------------------------------------------------- 9
Verdict effective_capacity_family(std::uint64_t seed) {
    Verdict out;
    out.artifact = make_table({"L", "ms", "A", "ec", "ec_err", "ec_method_fallback", "ora", "mc", "mc_se"});
    const std::vector<double> as{0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<std::string> bad;
    for (std::size_t L : {2u, 3u})
        for (double ms : {4.0, 8.0}) {
            MetricRequest req;
            req.branches = BranchSet::iid({5.0, ms, db_to_linear(10.0)}, L);
            req.seed = seed;
            const std::string tag = "L=" + std::to_string(L) + " ms=" + fmt(ms);
            double prev = INFINITY, prev_err = 0.0;
            for (double a : as) {
                req.delay_exponent = a;
                req.method = Method::exact_h;
                const MetricResult r = effective_capacity(req);
                Row row{double(L), ms, a, r.value, r.error_estimate, double(r.diagnostics.count("fallback"))};
                if (r.value > prev + r.error_estimate + prev_err)
                    bad.push_back(tag + ": increases at A=" + fmt(a));
                prev = r.value;
                prev_err = r.error_estimate;
                row.push_back(std::nullopt);
                if (a == 1.0) {
                    req.method = Method::monte_carlo;
                    const MetricResult mc = effective_capacity(req);
                    row.push_back(mc.value);
                    row.push_back(mc.error_estimate);
                    if (std::abs(mc.value - r.value) > 3.0 * mc.error_estimate)
                        bad.push_back(tag + ": MC " + fmt(mc.value) + " vs " + fmt(r.value) + " beyond 3 SE");
                } else {
                    row.push_back(std::nullopt);
                    row.push_back(std::nullopt);
                }
                out.artifact.rows.push_back(row);
            }
            req.delay_exponent = 1e-3;
            req.method = Method::exact_h;
            const MetricResult small = effective_capacity(req);
            req.method = Method::oracle;
            const MetricResult ora = capacity_ora(req);
            out.artifact.rows.push_back({double(L), ms, 1e-3, small.value, small.error_estimate,
                                         double(small.diagnostics.count("fallback")), ora.value, std::nullopt,
                                         std::nullopt});
            if (rel_diff(small.value, ora.value) > 0.01)
                bad.push_back(tag + ": A=1e-3 gives " + fmt(small.value) + " vs ORA " + fmt(ora.value));
        }
    out.pass = bad.empty();
    out.detail = bad.empty() ? "monotone in A, A=1e-3 within 1% of ORA, MC within 3 SE (4 settings)" : bad[0];
    for (std::size_t i = 1; i < bad.size(); ++i)
        out.detail += "; " + bad[i];
    return out;
}

// ---------------------------------------------------------------- 10
Verdict sreg_insensitivity() {
    Verdict out;
    out.artifact = make_table({"s_reg", "cifr", "ora", "opra"});
    MetricRequest req;
    req.branches = BranchSet::iid({2.5, 4.5, db_to_linear(10.0)}, 2);
    req.method = Method::exact_h;
    req.fallback = false;
    std::vector<double> c, o, p;
    for (double s : {1e-8, 1e-6, 1e-4}) {
        req.s_reg = s;
        c.push_back(capacity_cifr(req).value);
        o.push_back(capacity_ora(req).value);
        p.push_back(capacity_opra(req).value);
        out.artifact.rows.push_back({s, c.back(), o.back(), p.back()});
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return (*hi - *lo) / std::abs(v[1]);
    };
    const double sc = spread(c), so = spread(o), sp = spread(p);
    out.pass = std::max({sc, so, sp}) < 1e-3;
    out.detail = "relative spread CIFR " + fmt(sc) + ", ORA " + fmt(so) + ", OPRA " + fmt(sp) + " (limit 1e-3)";
    return out;
}

// ---------------------------------------------------------------- 11
std::string determinism_artifacts(std::uint64_t seed, unsigned threads) {
    std::ostringstream os;
    moment_table().write_csv(os);
    tifr_limit_table().write_csv(os);
    const BranchSet b({{1.2, 6.0, 0.5}, {2.5, 4.0, 1.0}, {4.0, 8.0, 2.0}});
    write_sample_csv(os, sample_sum(b, 20000, seed, threads));
    SweepConfig cfg;
    cfg.metrics = {MetricKind::outage, MetricKind::ora, MetricKind::opra};
    cfg.m = {2.0};
    cfg.ms = {4.0};
    cfg.branch_counts = {2, 3};
    cfg.snr_db = {0.0, 5.0, 10.0};
    cfg.methods = {Method::single_f, Method::monte_carlo};
    cfg.samples = 20000;
    cfg.seed = seed;
    cfg.threads = threads;
    run_sweep(cfg).write_csv(os);
    return os.str();
}

Verdict determinism(std::uint64_t seed) {
    Verdict out;
    out.artifact = make_table({"run", "threads", "bytes"});
    const std::string a = determinism_artifacts(seed, 1);
    const std::string b = determinism_artifacts(seed, 1);
    const std::string c = determinism_artifacts(seed, 3);
    out.artifact.rows.push_back({1.0, 1.0, double(a.size())});
    out.artifact.rows.push_back({2.0, 1.0, double(b.size())});
    out.artifact.rows.push_back({3.0, 3.0, double(c.size())});
    out.pass = a == b && a == c;
    out.detail = out.pass ? "three runs byte-identical (" + std::to_string(a.size()) + " bytes, 1 and 3 threads)"
                          : "artifacts differ between runs";
    return out;
}

bool selected(const ValidationOptions& opts, const CriterionInfo& c) {
    if (opts.only.empty())
        return true;
    for (const auto& s : opts.only)
        if (s == c.key || s == std::to_string(c.id))
            return true;
    return false;
}

} // namespace

SweepConfig capacity_comparison_config(std::uint64_t seed) {
    SweepConfig cfg;
    cfg.metrics = {MetricKind::cifr, MetricKind::tifr, MetricKind::ora, MetricKind::opra};
    cfg.awgn = true;
    cfg.m = {2.5};
    cfg.ms = {4.5};
    cfg.branch_counts = {2};
    cfg.snr_db = db_range(0.0, 30.0, 5.0);
    cfg.cutoff = 1.0;
    cfg.methods = {Method::exact_h, Method::single_f, Method::monte_carlo};
    cfg.samples = 100000;
    cfg.seed = seed;
    return cfg;
}

const std::vector<CriterionInfo>& criteria() {
    static const std::vector<CriterionInfo> list{
        {1, "single-branch", "L=1 sum pdf/cdf match the F closed forms"},
        {2, "cross-oracle", "Fox H vs Laplace inversion vs empirical CDF"},
        {3, "ks", "KS acceptance of the optimized single F"},
        {4, "moments", "matched single F reproduces three moments"},
        {5, "op-slope", "OP high-SNR slope equals the diversity order"},
        {6, "ordering", "capacity ordering across adaptation policies"},
        {7, "gamma0", "water-filling cutoff solver"},
        {8, "tifr-limit", "TIFR with a vanishing cutoff reduces to CIFR"},
        {9, "effective-capacity", "effective capacity behaviour in A"},
        {10, "sreg", "insensitivity to the regularization s"},
        {11, "determinism", "byte-identical artifacts for a fixed seed"},
    };
    return list;
}

std::vector<CriterionOutcome> run_validation(const ValidationOptions& opts,
                                             const std::function<void(const CriterionOutcome&)>& on_result) {
    for (const auto& s : opts.only) {
        const bool known = std::any_of(criteria().begin(), criteria().end(), [&](const CriterionInfo& c) {
            return s == c.key || s == std::to_string(c.id);
        });
        if (!known)
            fail(ErrorCode::invalid_parameters, "unknown criterion '" + s + "'");
    }
    std::vector<CriterionOutcome> results;
    for (const auto& c : criteria()) {
        if (!selected(opts, c))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            switch (c.id) {
            case 1: v = single_branch(); break;
            case 2: v = cross_oracle(opts.seed); break;
            case 3: v = ks_family(opts.seed); break;
            case 4: v = moments(); break;
            case 5: v = op_slope(); break;
            case 6: v = ordering(opts.seed); break;
            case 7: v = gamma0_solver(); break;
            case 8: v = tifr_limit(); break;
            case 9: v = effective_capacity_family(opts.seed); break;
            case 10: v = sreg_insensitivity(); break;
            case 11: v = determinism(opts.seed); break;
            }
        } catch (const Error& e) {
            v.pass = false;
            v.detail = std::string("numeric failure: ") + e.what();
        }
        CriterionOutcome o;
        o.info = c;
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.pass = v.pass;
        // runtime limits from the suite definition
        if (c.id == 1 && o.seconds > 30.0) {
            o.pass = false;
            v.detail += "; took longer than 30 s";
        }
        if (c.id == 2 && o.seconds > 120.0) {
            o.pass = false;
            v.detail += "; took longer than 2 min";
        }
        o.detail = std::move(v.detail);
        o.artifact = std::move(v.artifact);
        if (on_result)
            on_result(o);
        results.push_back(std::move(o));
    }
    return results;
}

} // namespace fsum
