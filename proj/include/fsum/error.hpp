#pragma once

#include <stdexcept>
#include <string>

namespace fsum {

enum class ErrorCode {
    domain,
    gamma_pole,
    no_convergence,
    infeasible_contour,
    dimension_refused,
    tolerance_unmet,
    budget_exceeded,
    moment_missing,
    invalid_parameters,
    empty_sample,
    divergent,
    no_sign_change,
};

const char* to_string(ErrorCode code);

// Every library failure is reported through this type so callers can switch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace fsum
