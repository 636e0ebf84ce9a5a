#pragma once

#include <cstdint>
#include <vector>

namespace fsum {

// Seeded draws of a branch sum, sorted ascending.
struct SampleSet {
    std::vector<double> draws;
    std::uint64_t seed = 0;
    std::uint64_t fingerprint = 0;

    std::size_t count() const { return draws.size(); }
    void validate() const;
};

} // namespace fsum
