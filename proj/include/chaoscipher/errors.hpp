#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chaoscipher {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter outside the documented bounds of an operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InsufficientEntropy : public Error {
public:
    using Error::Error;
};

// Key file problems carry the 1-based line number (0 when the problem is
// not tied to a line, e.g. a missing field).
class KeyParseError : public Error {
public:
    enum class Kind { malformed_line, out_of_range, missing_field, unknown_field, duplicate_field };

    KeyParseError(Kind kind, std::size_t line, const std::string& message)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

class ContainerError : public Error {
public:
    enum class Kind { bad_magic, truncated, sentinel_mismatch, length_overflow, malformed };

    ContainerError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Raised when a brute-force search space exceeds the configured cap.
class SpaceTooLarge : public Error {
public:
    SpaceTooLarge(const std::string& message, double log2_size)
        : Error(message), log2_size_(log2_size) {}

    double log2_size() const noexcept { return log2_size_; }

private:
    double log2_size_;
};

}  // namespace chaoscipher
