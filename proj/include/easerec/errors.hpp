#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace easerec {

/// Malformed input data. Carries a 1-based line number when the source is
/// line-oriented; line() returns 0 when no line applies.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown entity or user name.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Factorization failure or non-convergence.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace easerec
