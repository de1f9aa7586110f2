#pragma once

#include <stdexcept>
#include <string>

namespace tdcis {

// Invalid user-facing input: bad config keys/values, out-of-contract
// parameters.  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An algorithm failed its numerical contract: SCF stagnation, eigensolver
// non-convergence, quadrature failure.  The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_config(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

inline void require_numeric(bool ok, const std::string& msg) {
    if (!ok) throw NumericalError(msg);
}

} // namespace tdcis
