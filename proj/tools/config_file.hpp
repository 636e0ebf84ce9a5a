#pragma once

#include <CLI11.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace fsum::cli {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fills options of `sub` from a flat JSON object keyed by long flag names ("snr-db": [0, 3]).
// Options already given on the command line are left alone, as are keys whose partner in
// `exclusive` was given (so --snr on the command line beats "snr-db" in the file).
void apply_json_config(CLI::App& sub, const std::string& path,
                       const std::multimap<std::string, std::string>& exclusive = {});

} // namespace fsum::cli
