#pragma once

#include <stdexcept>
#include <string>

namespace vocabselect {

// Bad configuration, unreadable or malformed input. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Violated estimator precondition or numerical failure. The CLI maps this
// to exit code 3.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace vocabselect
