#include "fsum/tables.hpp"

#include "fsum/error.hpp"
#include "fsum/fisher_f.hpp"
#include "fsum/metrics.hpp"
#include "fsum/montecarlo.hpp"
#include "fsum/parallel.hpp"
#include "fsum/sum_dist.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fsum {

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        fail(ErrorCode::invalid_parameters, "no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::optional<double> Table::at(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
}

std::string format_cell(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v))
        return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_cell(row[i]);
        os << '\n';
    }
}

void Table::write_json(std::ostream& os) const {
    for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (row[i] && std::isfinite(*row[i]))
                obj[columns[i]] = std::stod(format_cell(row[i]));
            else
                obj[columns[i]] = nullptr;
        }
        os << obj.dump() << '\n';
    }
}

const char* short_name(Method m) {
    switch (m) {
    case Method::exact_h: return "exact";
    case Method::single_f: return "approx";
    case Method::asymptotic: return "asym";
    case Method::monte_carlo: return "mc";
    case Method::oracle: return "oracle";
    }
    return "?";
}

namespace {

std::string cell_label(const std::string& where, const char* what, const std::exception& e) {
    return where + ": " + what + ": " + e.what();
}

// histogram density at each grid point, bins split at grid midpoints
std::vector<double> histogram_density(const SampleSet& s, const std::vector<double>& z) {
    const std::size_t n = z.size();
    std::vector<double> out(n, 0.0);
    if (n == 0)
        return out;
    const double v = static_cast<double>(s.count());
    for (std::size_t i = 0; i < n; ++i) {
        const double gap_lo = i > 0 ? z[i] - z[i - 1] : (n > 1 ? z[1] - z[0] : 1.0);
        const double gap_hi = i + 1 < n ? z[i + 1] - z[i] : gap_lo;
        const double lo = std::max(0.0, z[i] - 0.5 * gap_lo);
        const double hi = z[i] + 0.5 * gap_hi;
        const double count = v * (empirical_cdf(s, hi) - empirical_cdf(s, lo));
        out[i] = hi > lo ? count / (v * (hi - lo)) : 0.0;
    }
    return out;
}

bool supports(MetricKind k, Method m) {
    switch (m) {
    case Method::exact_h:
    case Method::single_f:
    case Method::monte_carlo: return true;
    case Method::asymptotic: return k == MetricKind::outage;
    case Method::oracle:
        return k == MetricKind::outage || k == MetricKind::effective_capacity || k == MetricKind::ora ||
               k == MetricKind::cifr;
    }
    return false;
}

} // namespace

Table run_dist(const DistConfig& cfg) {
    cfg.branches.validate();
    if (!cfg.pdf && !cfg.cdf)
        fail(ErrorCode::invalid_parameters, "dist needs --pdf and/or --cdf");
    for (double z : cfg.z)
        if (!(z >= 0.0) || !std::isfinite(z))
            fail(ErrorCode::domain, "z grid must be finite and nonnegative");
    if (!std::is_sorted(cfg.z.begin(), cfg.z.end()))
        fail(ErrorCode::invalid_parameters, "z grid must be ascending");

    Table t;
    t.columns.push_back("z");
    std::vector<std::pair<bool, Method>> cols; // (is_pdf, method)
    for (bool pdf : {true, false}) {
        if ((pdf && !cfg.pdf) || (!pdf && !cfg.cdf))
            continue;
        for (Method m : cfg.methods) {
            if (m == Method::asymptotic && pdf)
                continue;
            cols.emplace_back(pdf, m);
            t.columns.push_back(std::string(pdf ? "pdf_" : "cdf_") + short_name(m));
        }
    }
    const std::size_t n = cfg.z.size();
    t.rows.assign(n, std::vector<std::optional<double>>(t.columns.size()));
    for (std::size_t i = 0; i < n; ++i)
        t.rows[i][0] = cfg.z[i];

    const double total_m = cfg.branches.total_m();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto [pdf, method] = cols[c];
        const std::string tag = std::string(pdf ? "pdf " : "cdf ") + to_string(method);
        try {
            std::vector<std::optional<double>> col(n);
            if (method == Method::monte_carlo) {
                const SampleSet s = sample_sum(cfg.branches, cfg.samples, cfg.seed);
                if (pdf) {
                    const auto d = histogram_density(s, cfg.z);
                    for (std::size_t i = 0; i < n; ++i)
                        col[i] = d[i];
                } else {
                    for (std::size_t i = 0; i < n; ++i)
                        col[i] = empirical_cdf(s, cfg.z[i]);
                }
            } else {
                FadingParams f;
                if (method == Method::single_f)
                    f = single_f_params(cfg.branches, cfg.epsilon);
                for (std::size_t i = 0; i < n; ++i) {
                    const double z = cfg.z[i];
                    try {
                        if (z == 0.0) {
                            if (!pdf)
                                col[i] = 0.0;
                            else if ((method == Method::single_f ? f.m : total_m) > 1.0)
                                col[i] = 0.0;
                            continue;
                        }
                        switch (method) {
                        case Method::exact_h:
                            col[i] = pdf ? sum_pdf(cfg.branches, z, cfg.tolerance)
                                         : sum_cdf(cfg.branches, z, cfg.tolerance);
                            break;
                        case Method::single_f: col[i] = pdf ? fisher_f::pdf(f, z) : fisher_f::cdf(f, z); break;
                        case Method::asymptotic: col[i] = sum_cdf_asymptotic(cfg.branches, z); break;
                        case Method::oracle:
                            col[i] = pdf ? laplace_inversion_pdf(cfg.branches, z)
                                         : laplace_inversion_cdf(cfg.branches, z);
                            break;
                        default: break;
                        }
                    } catch (const Error& e) {
                        // a refused dimension fails the same way at every z
                        if (e.code() == ErrorCode::dimension_refused)
                            throw;
                        std::ostringstream where;
                        where << "z=" << format_cell(z);
                        t.diagnostics.push_back(cell_label(where.str(), tag.c_str(), e));
                    }
                }
            }
            for (std::size_t i = 0; i < n; ++i)
                t.rows[i][c + 1] = col[i];
        } catch (const Error& e) {
            t.diagnostics.push_back(cell_label("all z", tag.c_str(), e));
        }
    }
    return t;
}

void SweepConfig::validate() const {
    if (metrics.empty() && !awgn)
        fail(ErrorCode::invalid_parameters, "sweep needs at least one metric");
    if (methods.empty())
        fail(ErrorCode::invalid_parameters, "sweep needs at least one method");
    if (m.empty() || ms.empty())
        fail(ErrorCode::invalid_parameters, "sweep needs m and ms");
    if (branch_counts.empty())
        fail(ErrorCode::invalid_parameters, "sweep needs at least one branch count");
    if (snr_db.empty())
        fail(ErrorCode::invalid_parameters, "sweep needs at least one SNR point");
    if (delay_exponents.empty())
        fail(ErrorCode::invalid_parameters, "sweep needs at least one delay exponent");
    for (std::size_t L : branch_counts) {
        if (L == 0)
            fail(ErrorCode::invalid_parameters, "branch count must be positive");
        if ((m.size() != 1 && m.size() != L) || (ms.size() != 1 && ms.size() != L))
            fail(ErrorCode::invalid_parameters, "m and ms need one entry or one per branch");
    }
}

BranchSet SweepConfig::branches(std::size_t count, double db) const {
    std::vector<FadingParams> b(count);
    for (std::size_t l = 0; l < count; ++l) {
        b[l].m = m.size() == 1 ? m[0] : m[l];
        b[l].ms = ms.size() == 1 ? ms[0] : ms[l];
        b[l].mean_snr = db_to_linear(db);
    }
    return BranchSet(std::move(b));
}

std::vector<double> db_range(double start, double stop, double step) {
    if (!(step > 0.0))
        fail(ErrorCode::invalid_parameters, "sweep step must be positive");
    if (stop < start)
        fail(ErrorCode::invalid_parameters, "sweep stop is below start");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i)
        out.push_back(start + i * step);
    return out;
}

Table run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const bool has_ec =
        std::find(cfg.metrics.begin(), cfg.metrics.end(), MetricKind::effective_capacity) != cfg.metrics.end();
    const bool suffix = cfg.branch_counts.size() > 1;

    struct Cell {
        std::size_t L;
        MetricKind kind;
        Method method;
    };
    Table t;
    t.columns.push_back("snr_db");
    if (has_ec)
        t.columns.push_back("A");
    std::vector<Cell> cells;
    std::vector<std::size_t> awgn_cols;
    for (std::size_t L : cfg.branch_counts) {
        const std::string tail = suffix ? "_L" + std::to_string(L) : "";
        for (MetricKind k : cfg.metrics)
            for (Method m : cfg.methods) {
                if (!supports(k, m))
                    continue;
                const std::string base = std::string(to_string(k)) + "_" + short_name(m);
                cells.push_back({L, k, m});
                t.columns.push_back(base + tail);
                t.columns.push_back(base + "_err" + tail);
                if (k == MetricKind::opra)
                    t.columns.push_back(base + "_gamma0" + tail);
            }
        if (cfg.awgn)
            t.columns.push_back("awgn" + tail);
    }

    struct Point {
        double db;
        double a;
    };
    std::vector<Point> points;
    for (double db : cfg.snr_db)
        for (double a : has_ec ? cfg.delay_exponents : std::vector<double>{cfg.delay_exponents[0]})
            points.push_back({db, a});

    std::vector<std::vector<std::optional<double>>> rows(points.size());
    std::vector<std::vector<std::string>> notes(points.size());
    parallel_for(points.size(), cfg.threads, [&](std::size_t p) {
        auto& row = rows[p];
        row.push_back(points[p].db);
        if (has_ec)
            row.push_back(points[p].a);
        std::size_t next = 0;
        for (std::size_t L : cfg.branch_counts) {
            const BranchSet b = cfg.branches(L, points[p].db);
            for (; next < cells.size() && cells[next].L == L; ++next) {
                const Cell& c = cells[next];
                MetricRequest req;
                req.branches = b;
                req.method = c.method;
                req.threshold = cfg.threshold;
                req.delay_exponent = points[p].a;
                req.cutoff = cfg.cutoff;
                req.s_reg = cfg.s_reg;
                req.mc_samples = cfg.samples;
                req.seed = cfg.seed;
                req.epsilon = cfg.epsilon;
                req.tolerance = cfg.tolerance;
                req.fallback = cfg.fallback;
                std::optional<double> value, err, g0;
                try {
                    const MetricResult r = evaluate_metric(c.kind, req);
                    value = r.value;
                    err = r.error_estimate;
                    if (auto it = r.diagnostics.find("gamma0"); it != r.diagnostics.end())
                        g0 = it->second;
                    for (const auto& n : r.notes) {
                        std::ostringstream where;
                        where << "snr_db=" << format_cell(points[p].db) << " L=" << L << ": " << to_string(c.kind)
                              << " " << to_string(c.method) << ": " << n;
                        notes[p].push_back(where.str());
                    }
                } catch (const Error& e) {
                    std::ostringstream where;
                    where << "snr_db=" << format_cell(points[p].db);
                    if (has_ec)
                        where << " A=" << format_cell(points[p].a);
                    where << " L=" << L;
                    const std::string what = std::string(to_string(c.kind)) + " " + to_string(c.method);
                    notes[p].push_back(cell_label(where.str(), what.c_str(), e));
                }
                row.push_back(value);
                row.push_back(err);
                if (c.kind == MetricKind::opra)
                    row.push_back(g0);
            }
            if (cfg.awgn)
                row.push_back(capacity_awgn(b.total_mean()));
        }
    });
    t.rows = std::move(rows);
    for (auto& n : notes)
        t.diagnostics.insert(t.diagnostics.end(), n.begin(), n.end());
    return t;
}

} // namespace fsum
