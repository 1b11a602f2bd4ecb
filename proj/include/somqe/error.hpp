#pragma once

#include <stdexcept>
#include <string>

namespace somqe {

/// File and wire-format problems (bad magic, truncated payload, malformed
/// header). CLI maps these to exit code 2.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// A reproduction pipeline assertion did not hold. CLI maps these to exit
/// code 3.
struct reproduction_failure : std::runtime_error {
    explicit reproduction_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace somqe
