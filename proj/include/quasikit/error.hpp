#pragma once

#include <stdexcept>
#include <string>

namespace quasikit {

/// Input rejected: out-of-range parameters, violated preconditions, malformed data.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Computation could not be completed reliably (conditioning, non-convergence).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw validation_error(message);
}

} // namespace detail
} // namespace quasikit
