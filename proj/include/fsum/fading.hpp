#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fsum {

// One F-distributed branch: multipath parameter m, shadowing shape ms, mean SNR (linear).
struct FadingParams {
    double m = 1.0;
    double ms = 2.0;
    double mean_snr = 1.0;

    void validate() const;
    // (ms - 1) * mean / m, the scale of the F law
    double scale() const { return (ms - 1.0) * mean_snr / m; }
};

struct BranchSet {
    std::vector<FadingParams> branches;

    BranchSet() = default;
    BranchSet(std::vector<FadingParams> b) : branches(std::move(b)) {}
    static BranchSet iid(const FadingParams& p, std::size_t count);

    std::size_t size() const { return branches.size(); }
    const FadingParams& operator[](std::size_t i) const { return branches[i]; }
    void validate() const;
    double total_mean() const;
    double total_m() const;
    bool identical() const;
    std::uint64_t fingerprint() const;
    std::string describe() const;
};

double db_to_linear(double db);
double linear_to_db(double x);

} // namespace fsum
