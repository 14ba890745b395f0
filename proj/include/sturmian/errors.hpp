#pragma once

#include <stdexcept>
#include <string>

namespace sturmian {

// Bad user-supplied configuration (unknown frequency spec, invalid depth, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: overflow of an integer width, eigensolver breakdown,
// a band count that does not match its structural prediction, ...
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A theorem hypothesis is violated (typically the coupling regime V > 20).
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sturmian
