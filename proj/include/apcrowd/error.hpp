#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apcrowd {

// Malformed configuration (simulator, schedule, pipeline flags).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data that violates a structural contract (grouping, widths, rosters).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A single unparseable row in a CSV input.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A trainer could not produce a model with any skill (e.g. AdaBoost with error >= 0.5 on round 1).
class DegenerateModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace apcrowd
