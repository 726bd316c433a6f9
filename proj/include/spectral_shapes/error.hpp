#pragma once

#include <stdexcept>
#include <string>

namespace spectral_shapes {

// Thrown on contract violations: bad inputs, failed internal checks,
// non-converged iterations. Message carries enough context to locate the call.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

}  // namespace spectral_shapes
