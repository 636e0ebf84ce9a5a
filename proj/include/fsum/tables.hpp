#pragma once

#include "fsum/fading.hpp"
#include "fsum/result.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fsum {

// Column-named numeric table; missing cells stay empty in CSV and null in JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
    std::vector<std::string> diagnostics; // one line per failed cell

    std::size_t column(const std::string& name) const;
    std::optional<double> at(std::size_t row, const std::string& name) const;
    void write_csv(std::ostream& os) const;
    // one JSON object per line
    void write_json(std::ostream& os) const;
};

// %.12g, or empty for missing and non-finite values
std::string format_cell(const std::optional<double>& v);

// Short column tag of a method: exact, approx, asym, mc, oracle.
const char* short_name(Method m);

struct DistConfig {
    BranchSet branches;
    bool pdf = true;
    bool cdf = false;
    std::vector<double> z;
    std::vector<Method> methods{Method::exact_h, Method::single_f};
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double epsilon = 0.0;
    double tolerance = 0.0;
};

// Columns z, pdf_<method>..., cdf_<method>...; the monte_carlo pdf is a histogram density
// over bins split at the midpoints of the z grid.
Table run_dist(const DistConfig& cfg);

struct SweepConfig {
    std::vector<MetricKind> metrics;
    bool awgn = false;                 // add the AWGN capacity column
    std::vector<double> m, ms;         // one entry (shared) or one per branch
    std::vector<std::size_t> branch_counts{2};
    std::vector<double> snr_db;        // sweep points, applied to every branch
    std::vector<double> delay_exponents{1.0};
    double threshold = 1.0;            // linear
    double cutoff = 1.0;               // linear
    double s_reg = 1e-6;
    double epsilon = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::vector<Method> methods{Method::exact_h, Method::single_f};
    unsigned threads = 0;
    bool fallback = false;             // sweeps report infeasible cells instead of substituting

    void validate() const;
    BranchSet branches(std::size_t count, double snr_db) const;
};

std::vector<double> db_range(double start, double stop, double step);

// Rows in sweep order: snr_db, then A when ec is requested; value and _err columns per
// (metric, method) with an _L<count> suffix when several branch counts are swept.
Table run_sweep(const SweepConfig& cfg);

} // namespace fsum
