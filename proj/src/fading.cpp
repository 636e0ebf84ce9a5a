#include "fsum/fading.hpp"

#include "fsum/error.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace fsum {

void FadingParams::validate() const {
    std::ostringstream msg;
    if (!(m > 0.0) || !std::isfinite(m))
        msg << "m must be positive (got " << m << ")";
    else if (!(ms > 1.0) || !std::isfinite(ms))
        msg << "ms must exceed 1 (got " << ms << ")";
    else if (!(mean_snr > 0.0) || !std::isfinite(mean_snr))
        msg << "mean SNR must be positive (got " << mean_snr << ")";
    else
        return;
    fail(ErrorCode::invalid_parameters, msg.str());
}

BranchSet BranchSet::iid(const FadingParams& p, std::size_t count) {
    return BranchSet(std::vector<FadingParams>(count, p));
}

void BranchSet::validate() const {
    if (branches.empty())
        fail(ErrorCode::invalid_parameters, "branch set is empty");
    for (const auto& b : branches)
        b.validate();
}

double BranchSet::total_mean() const {
    double s = 0.0;
    for (const auto& b : branches)
        s += b.mean_snr;
    return s;
}

double BranchSet::total_m() const {
    double s = 0.0;
    for (const auto& b : branches)
        s += b.m;
    return s;
}

bool BranchSet::identical() const {
    for (const auto& b : branches)
        if (b.m != branches[0].m || b.ms != branches[0].ms || b.mean_snr != branches[0].mean_snr)
            return false;
    return true;
}

std::uint64_t BranchSet::fingerprint() const {
    // FNV-1a over the parameter bytes
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& b : branches) {
        mix(b.m);
        mix(b.ms);
        mix(b.mean_snr);
    }
    return h;
}

std::string BranchSet::describe() const {
    std::ostringstream os;
    os.precision(10);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        if (i)
            os << " + ";
        os << "F(" << branches[i].m << "," << branches[i].ms << "," << branches[i].mean_snr << ")";
    }
    return os.str();
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

} // namespace fsum
