#pragma once

#include <stdexcept>
#include <string>

namespace cpldpc {

/// Invalid parameters, infeasible ensembles, malformed config files.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical degeneracy (undefined bound, degenerate linearization, ...).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decoder saw inconsistent known bits (impossible over a true BEC).
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cpldpc
