#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trade {

/// Input data violates a schema or domain invariant. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A line of an input file could not be parsed.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : ValidationError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inconsistent or unusable run configuration. Maps to CLI exit code 1.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Metrics cannot be computed (e.g. every curve point undefined).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Synthetic world parameters cannot be realised.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trade
