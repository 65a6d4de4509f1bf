#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asrf/types.hpp"

namespace asrf {

// Invariant breaches are errors; timeline-coverage gaps are warnings
// (ingestion hard-fails on the former and only reports the latter).
enum class Severity { Error, Warning };

struct Violation {
    Severity severity;
    std::string code;                // stable machine-readable id, e.g. "grade.pd.range"
    std::optional<Quarter> quarter;  // quarter the finding is about, when applicable
    std::string subject;             // grade id or field name, when applicable
    std::string message;
};

// Checks every type invariant plus the timeline-coverage rule: a factor
// reading at quarter t needs the snapshot at t-2 and losses at t-1..t+2.
// Returns an empty report for a valid series.
std::vector<Violation> validate_series(const QuarterSeries& series);

bool has_errors(const std::vector<Violation>& report);

std::string format_violation(const Violation& v);

}  // namespace asrf
