#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asrf {

// Bad argument to a math routine (non-finite input, probability outside its domain).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Root bracket does not straddle a sign change.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing or inconsistent supervisory inputs (firm size, maturity, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The series lacks a quarter required by the requested computation.
struct CoverageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Target loss level lies outside the attainable range of the conditional-loss
// curve on the solver bracket. Carries the attainable interval for diagnostics.
struct InfeasibleError : std::runtime_error {
    InfeasibleError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), attainable_lo(lo), attainable_hi(hi) {}
    double attainable_lo;  // conditional loss at the upper bracket end (best economy)
    double attainable_hi;  // conditional loss at the lower bracket end (worst economy)
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(line ? msg + " (line " + std::to_string(line) +
                                        ", column " + std::to_string(column) + ")"
                                  : msg),
          line(line),
          column(column) {}
    std::size_t line;
    std::size_t column;
};

}  // namespace asrf
