// fsum: distribution, metric, fit and validation front end.
#include "config_file.hpp"

#include "fsum/approximation.hpp"
#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/parallel.hpp"
#include "fsum/sum_dist.hpp"
#include "fsum/tables.hpp"
#include "fsum/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using fsum::cli::UsageError;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumeric = 3;

struct BranchFlags {
    std::size_t count = 0;
    std::vector<double> m, ms, snr, snr_db;
};

void add_branch_flags(CLI::App* sub, BranchFlags& f) {
    sub->add_option("-L,--branches", f.count, "number of branches (default: longest parameter list)");
    sub->add_option("--m", f.m, "multipath parameter m, one value or one per branch")->delimiter(',');
    sub->add_option("--ms", f.ms, "shadowing shape ms, one value or one per branch")->delimiter(',');
    auto* lin = sub->add_option("--snr", f.snr, "mean SNR per branch (linear)")->delimiter(',');
    auto* db = sub->add_option("--snr-db", f.snr_db, "mean SNR per branch in dB")->delimiter(',');
    lin->excludes(db);
}

double entry(const std::vector<double>& v, std::size_t l) { return v.size() == 1 ? v[0] : v[l]; }

fsum::BranchSet make_branches(const BranchFlags& f) {
    if (f.m.empty() || f.ms.empty())
        throw UsageError("--m and --ms are required");
    std::vector<double> snr = f.snr;
    for (double d : f.snr_db)
        snr.push_back(fsum::db_to_linear(d));
    if (snr.empty())
        snr.push_back(1.0);
    std::size_t L = f.count;
    if (L == 0)
        L = std::max({f.m.size(), f.ms.size(), snr.size()});
    for (const std::vector<double>* v : {&f.m, &f.ms, static_cast<const std::vector<double>*>(&snr)})
        if (v->size() != 1 && v->size() != L)
            throw UsageError("--m, --ms and --snr/--snr-db need one value or " + std::to_string(L) + " values");
    std::vector<fsum::FadingParams> b(L);
    for (std::size_t l = 0; l < L; ++l)
        b[l] = {entry(f.m, l), entry(f.ms, l), entry(snr, l)};
    return fsum::BranchSet(std::move(b));
}

std::vector<fsum::Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<fsum::Method> out;
    for (const auto& n : names) {
        try {
            out.push_back(fsum::parse_method(n));
        } catch (const fsum::Error&) {
            throw UsageError("unknown method '" + n + "' (exact, approx, asym, mc, oracle)");
        }
    }
    if (out.empty())
        throw UsageError("at least one method is required");
    return out;
}

double linear_or_db(const CLI::App* sub, const char* db_flag, double linear, double db) {
    return sub->get_option(db_flag)->count() > 0 ? fsum::db_to_linear(db) : linear;
}

struct Output {
    std::string path;
    bool json = false;
};

void add_output_flags(CLI::App* sub, Output& o) {
    sub->add_option("-o,--out", o.path, "output file (default: stdout)");
    sub->add_flag("--json", o.json, "one JSON object per row instead of CSV");
}

void emit(const fsum::Table& t, const Output& o) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.path.empty()) {
        file.open(o.path);
        if (!file)
            throw UsageError("cannot write " + o.path);
        os = &file;
    }
    if (o.json)
        t.write_json(*os);
    else
        t.write_csv(*os);
    for (const auto& d : t.diagnostics)
        std::cerr << "fsum: " << d << "\n";
}

bool any_value(const fsum::Table& t, std::size_t skip_leading) {
    for (const auto& row : t.rows)
        for (std::size_t c = skip_leading; c < row.size(); ++c)
            if (row[c])
                return true;
    return false;
}

// ---------------------------------------------------------------- dist

struct DistArgs {
    BranchFlags branches;
    bool pdf = false, cdf = false;
    std::vector<double> z;
    double zmin = 0.0, zmax = 10.0;
    std::size_t points = 201;
    std::vector<std::string> methods{"exact", "approx"};
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double epsilon = 0.0, tol = 0.0;
    std::string samples_out;
    Output out;
};

int run_dist(DistArgs& a) {
    fsum::DistConfig cfg;
    cfg.branches = make_branches(a.branches);
    cfg.pdf = a.pdf || !a.cdf;
    cfg.cdf = a.cdf;
    cfg.methods = parse_methods(a.methods);
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.epsilon = a.epsilon;
    cfg.tolerance = a.tol;
    if (!a.z.empty()) {
        cfg.z = a.z;
    } else {
        if (a.points < 2 || !(a.zmax > a.zmin) || a.zmin < 0.0)
            throw UsageError("z grid needs 0 <= zmin < zmax and at least two points");
        for (std::size_t i = 0; i < a.points; ++i)
            cfg.z.push_back(a.zmin + (a.zmax - a.zmin) * static_cast<double>(i) / (a.points - 1));
    }
    const fsum::Table t = fsum::run_dist(cfg);
    emit(t, a.out);
    if (!a.samples_out.empty()) {
        std::ofstream os(a.samples_out);
        if (!os)
            throw UsageError("cannot write " + a.samples_out);
        fsum::write_sample_csv(os, fsum::sample_sum(cfg.branches, cfg.samples, cfg.seed));
    }
    return any_value(t, 1) ? kOk : kNumeric;
}

// ---------------------------------------------------------------- metric

struct MetricArgs {
    std::vector<std::string> metrics;
    std::vector<std::size_t> counts{2};
    std::vector<double> m, ms, snr, snr_db, sweep_db;
    double threshold = 1.0, threshold_db = 0.0;
    double cutoff = 1.0, cutoff_db = 0.0;
    std::vector<double> delay{1.0};
    double s_reg = 1e-6;
    std::vector<std::string> methods{"exact", "approx"};
    double epsilon = 0.0, tol = 0.0;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    bool fallback = false;
    Output out;
};

int run_metric(CLI::App* sub, MetricArgs& a) {
    if (a.metrics.empty())
        throw UsageError("--metric is required");
    if (a.m.empty() || a.ms.empty())
        throw UsageError("--m and --ms are required");
    fsum::SweepConfig cfg;
    for (const auto& name : a.metrics) {
        if (name == "awgn") {
            cfg.awgn = true;
            continue;
        }
        try {
            cfg.metrics.push_back(fsum::parse_metric(name));
        } catch (const fsum::Error&) {
            throw UsageError("unknown metric '" + name + "' (op, ec, cifr, tifr, ora, opra, awgn)");
        }
    }
    cfg.branch_counts = a.counts;
    cfg.m = a.m;
    cfg.ms = a.ms;
    if (!a.sweep_db.empty()) {
        if (a.sweep_db.size() != 3)
            throw UsageError("--sweep-db takes start,stop,step");
        try {
            cfg.snr_db = fsum::db_range(a.sweep_db[0], a.sweep_db[1], a.sweep_db[2]);
        } catch (const fsum::Error& e) {
            throw UsageError(e.what());
        }
    }
    for (double d : a.snr_db)
        cfg.snr_db.push_back(d);
    for (double x : a.snr) {
        if (!(x > 0.0))
            throw UsageError("--snr values must be positive");
        cfg.snr_db.push_back(fsum::linear_to_db(x));
    }
    if (cfg.snr_db.empty())
        throw UsageError("metric needs --snr-db, --snr or --sweep-db");
    cfg.threshold = linear_or_db(sub, "--threshold-db", a.threshold, a.threshold_db);
    cfg.cutoff = linear_or_db(sub, "--cutoff-db", a.cutoff, a.cutoff_db);
    cfg.delay_exponents = a.delay;
    cfg.s_reg = a.s_reg;
    cfg.methods = parse_methods(a.methods);
    cfg.epsilon = a.epsilon;
    cfg.tolerance = a.tol;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.fallback = a.fallback;
    try {
        cfg.validate();
    } catch (const fsum::Error& e) {
        throw UsageError(e.what());
    }
    const fsum::Table t = fsum::run_sweep(cfg);
    emit(t, a.out);
    const std::size_t leading = t.columns.size() > 1 && t.columns[1] == "A" ? 2 : 1;
    return any_value(t, leading) ? kOk : kNumeric;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    BranchFlags branches;
    std::size_t samples = 10000;
    double alpha = 0.05;
    double eps_min = -0.5, eps_max = 0.5, eps_step = 0.005;
    std::size_t z_points = 400;
    std::uint64_t seed = 1;
    Output out;
};

int run_fit(FitArgs& a) {
    const fsum::BranchSet b = make_branches(a.branches);
    b.validate();
    fsum::EpsilonOptions eo;
    eo.grid = {a.eps_min, a.eps_max, a.eps_step};
    eo.z_points = a.z_points;
    eo.report_count = a.samples;
    eo.alpha = a.alpha;
    if (b.size() == 1)
        eo.grid = {0.0, 0.0, 1.0}; // a single branch matches itself
    fsum::CdfFunction reference;
    std::string ref_name;
    if (b.size() == 1) {
        reference = [&](double z) { return fsum::fisher_f::cdf(b[0], z); };
        ref_name = "closed form";
    } else if (b.size() <= 3) {
        reference = [&](double z) { return fsum::sum_cdf(b, z); };
        ref_name = "exact_h";
    } else {
        reference = [&](double z) { return fsum::laplace_inversion_cdf(b, z); };
        ref_name = "laplace inversion";
    }
    const fsum::EpsilonFit fit = fsum::optimize_epsilon(b, reference, eo);
    const fsum::SampleSet s = fsum::sample_sum(b, a.samples, a.seed);
    const fsum::KSReport ks = fsum::ks_test([&](double z) { return fsum::fisher_f::cdf(fit.params, z); }, s, a.alpha);

    fsum::Table t;
    t.columns = {"L", "mean_F", "m_F", "ms_F", "epsilon", "distance", "ks", "t_max", "pass"};
    t.rows.push_back({double(b.size()), fit.params.mean_snr, fit.params.m, fit.params.ms, fit.epsilon,
                      fit.report.statistic, ks.statistic, ks.critical, ks.pass ? 1.0 : 0.0});
    t.diagnostics.push_back("reference cdf: " + ref_name + "; " + std::to_string(fit.skipped) +
                            " epsilon grid points gave invalid parameters");
    emit(t, a.out);
    return ks.pass ? kOk : kValidationFailed;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    std::vector<std::string> only;
    std::uint64_t seed = 1;
    std::string out_dir;
    bool json = false;
};

int run_validate(ValidateArgs& a, unsigned threads) {
    fsum::ValidationOptions opts;
    opts.only = a.only;
    opts.seed = a.seed;
    opts.threads = threads;
    if (!a.out_dir.empty())
        fs::create_directories(a.out_dir);
    for (const auto& k : a.only) {
        bool known = false;
        for (const auto& c : fsum::criteria())
            known = known || k == c.key || k == std::to_string(c.id);
        if (!known)
            throw UsageError("unknown criterion '" + k + "'");
    }

    bool all = true;
    fsum::run_validation(opts, [&](const fsum::CriterionOutcome& c) {
        all = all && c.pass;
        if (a.json) {
            nlohmann::ordered_json j;
            j["id"] = c.info.id;
            j["key"] = c.info.key;
            j["pass"] = c.pass;
            j["seconds"] = c.seconds;
            j["detail"] = c.detail;
            std::cout << j.dump() << "\n";
        } else {
            char head[96];
            std::snprintf(head, sizeof head, "%s %2d %-20s %7.2fs  ", c.pass ? "PASS" : "FAIL", c.info.id,
                          c.info.key.c_str(), c.seconds);
            std::cout << head << c.detail << "\n";
        }
        std::cout.flush();
        if (!a.out_dir.empty()) {
            std::ofstream os(fs::path(a.out_dir) / (c.info.key + ".csv"));
            c.artifact.write_csv(os);
        }
    });
    return all ? kOk : kValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sums of Fisher-Snedecor F variables: distributions, MRC metrics, fits and checks", "fsum"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("-j,--threads", threads, "worker threads (default: FSUM_THREADS, else all cores)");

    std::map<CLI::App*, std::string> config_paths;
    auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config_paths[sub], "JSON file of flag values"); };
    const std::multimap<std::string, std::string> exclusive{
        {"snr", "snr-db"}, {"snr-db", "snr"}, {"snr", "sweep-db"}, {"snr-db", "sweep-db"}, {"sweep-db", "snr"},
        {"sweep-db", "snr-db"}, {"threshold", "threshold-db"}, {"threshold-db", "threshold"},
        {"cutoff", "cutoff-db"}, {"cutoff-db", "cutoff"}};

    DistArgs dist;
    auto* d = app.add_subcommand("dist", "pdf/cdf of the branch sum over a z grid");
    add_branch_flags(d, dist.branches);
    d->add_flag("--pdf", dist.pdf, "emit pdf columns (default)");
    d->add_flag("--cdf", dist.cdf, "emit cdf columns");
    d->add_option("--z", dist.z, "explicit ascending z grid (linear)")->delimiter(',');
    d->add_option("--zmin", dist.zmin, "grid start")->capture_default_str();
    d->add_option("--zmax", dist.zmax, "grid stop")->capture_default_str();
    d->add_option("--points", dist.points, "grid size")->capture_default_str();
    d->add_option("--methods", dist.methods, "exact, approx, asym, mc, oracle")->delimiter(',')->capture_default_str();
    d->add_option("--samples", dist.samples, "Monte Carlo draws")->capture_default_str();
    d->add_option("--seed", dist.seed, "Monte Carlo seed")->capture_default_str();
    d->add_option("--epsilon", dist.epsilon, "single-F adjustment factor")->capture_default_str();
    d->add_option("--tol", dist.tol, "relative tolerance of the exact path (0: default)");
    d->add_option("--samples-out", dist.samples_out, "write the Monte Carlo draws as index,value CSV");
    add_output_flags(d, dist.out);
    add_config(d);

    MetricArgs met;
    auto* m = app.add_subcommand("metric", "MRC metric sweep over mean SNR");
    m->add_option("--metric", met.metrics, "op, ec, cifr, tifr, ora, opra, awgn")->delimiter(',');
    m->add_option("-L,--branches", met.counts, "branch counts")->delimiter(',')->capture_default_str();
    m->add_option("--m", met.m, "m, one value or one per branch")->delimiter(',');
    m->add_option("--ms", met.ms, "ms, one value or one per branch")->delimiter(',');
    auto* snr = m->add_option("--snr", met.snr, "mean SNR points per branch (linear)")->delimiter(',');
    auto* snr_db = m->add_option("--snr-db", met.snr_db, "mean SNR points per branch in dB")->delimiter(',');
    auto* sweep = m->add_option("--sweep-db", met.sweep_db, "start,stop,step in dB")->delimiter(',');
    snr->excludes(snr_db)->excludes(sweep);
    snr_db->excludes(sweep);
    m->add_option("--threshold", met.threshold, "outage threshold (linear)")
        ->excludes(m->add_option("--threshold-db", met.threshold_db, "outage threshold in dB"));
    m->add_option("--cutoff", met.cutoff, "TIFR cutoff z0 (linear)")
        ->excludes(m->add_option("--cutoff-db", met.cutoff_db, "TIFR cutoff in dB"));
    m->add_option("-A,--delay-exponent", met.delay, "effective capacity delay exponents")->delimiter(',');
    m->add_option("--s-reg", met.s_reg, "final-value regularization")->capture_default_str();
    m->add_option("--methods", met.methods, "exact, approx, asym, mc, oracle")->delimiter(',')->capture_default_str();
    m->add_option("--epsilon", met.epsilon, "single-F adjustment factor");
    m->add_option("--tol", met.tol, "relative tolerance of the exact path (0: default)");
    m->add_option("--samples", met.samples, "Monte Carlo draws")->capture_default_str();
    m->add_option("--seed", met.seed, "Monte Carlo seed")->capture_default_str();
    m->add_flag("--fallback", met.fallback, "substitute single_f where the exact path is infeasible");
    add_output_flags(m, met.out);
    add_config(m);

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "moment-matched single F with optimized epsilon and a KS test");
    add_branch_flags(f, fit.branches);
    f->add_option("--samples", fit.samples, "KS sample size v")->capture_default_str();
    f->add_option("--alpha", fit.alpha, "KS significance")->capture_default_str();
    f->add_option("--eps-min", fit.eps_min)->capture_default_str();
    f->add_option("--eps-max", fit.eps_max)->capture_default_str();
    f->add_option("--eps-step", fit.eps_step)->capture_default_str();
    f->add_option("--z-points", fit.z_points, "distance grid size")->capture_default_str();
    f->add_option("--seed", fit.seed)->capture_default_str();
    add_output_flags(f, fit.out);
    add_config(f);

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "run the acceptance criteria");
    v->add_option("--only", val.only, "criterion keys or ids")->delimiter(',');
    v->add_option("--seed", val.seed)->capture_default_str();
    v->add_option("--out", val.out_dir, "directory for per-criterion CSV artifacts");
    v->add_flag("--json", val.json, "one JSON object per criterion");
    add_config(v);

    try {
        app.parse(argc, argv);
        for (auto& [sub, path] : config_paths)
            if (sub->parsed() && !path.empty())
                fsum::cli::apply_json_config(*sub, path, exclusive);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "fsum: " << e.what() << "\n";
        return kUsage;
    }

    if (threads > 0)
        setenv("FSUM_THREADS", std::to_string(threads).c_str(), 1);

    try {
        if (d->parsed())
            return run_dist(dist);
        if (m->parsed())
            return run_metric(m, met);
        if (f->parsed())
            return run_fit(fit);
        return run_validate(val, threads);
    } catch (const UsageError& e) {
        std::cerr << "fsum: " << e.what() << "\n";
        return kUsage;
    } catch (const fsum::Error& e) {
        std::cerr << "fsum: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "fsum: " << e.what() << "\n";
        return kNumeric;
    }
}
