#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "asrf/types.hpp"
#include "asrf/validate.hpp"

namespace asrf::io {

// File set backing one QuarterSeries. Schemas (header-exact, UTF-8, '.'
// decimal, ISO quarter-end dates, empty cells for non-applicable fields):
//   grades.csv:   quarter,grade_id,asset_class,ead,lgd,pd,maturity_years,firm_size,rho_override
//   accounts.csv: quarter,rwa_irb,rwa_credit,rwa_total,provisions,capital_base,non_irb_expected_loss
//   losses.csv:   quarter,credit_loss
struct CsvPaths {
    std::string grades;
    std::string accounts;
    std::string losses;
};

struct IngestResult {
    QuarterSeries series;
    std::vector<Violation> warnings;  // coverage gaps; invariant breaches throw
};

// Parses and validates; throws ParseError (with line/column) on malformed
// input and ValidationError on invariant violations.
IngestResult ingest(const CsvPaths& paths);

IngestResult ingest_streams(std::istream& grades, std::istream& accounts,
                            std::istream& losses);

// Canonical emission: quarters ascending, grade order preserved, shortest
// round-trip float formatting. emit(ingest(x)) is byte-identical to the
// canonical form of x.
void emit(const QuarterSeries& series, std::ostream& grades, std::ostream& accounts,
          std::ostream& losses);

// Writes grades.csv, accounts.csv, losses.csv under dir.
CsvPaths emit_directory(const QuarterSeries& series, const std::string& dir);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace asrf::io
