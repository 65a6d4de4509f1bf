#pragma once

#include <string>
#include <vector>

#include "asrf/math/root_find.hpp"
#include "asrf/types.hpp"

namespace asrf::factor {

// How total credit losses are split between IRB and other banking book
// exposures. ProportionalRwa applies the IRB share of credit RWA as at the
// anchor quarter; AllToIrb attributes everything to IRB exposures, giving a
// lower bound on the recovered factor.
enum class LossAllocation { ProportionalRwa, AllToIrb };

const char* to_string(LossAllocation a);
LossAllocation allocation_from_string(const std::string& s);

// One recovered realisation of the systematic risk factor.
struct FactorReading {
    Quarter quarter;            // t
    double y;                   // recovered realisation
    double alpha;               // 1 - Phi(y)
    int lag_quarters;           // bad-debt recognition delay, 0..2
    LossAllocation allocation;
    double window_losses;       // allocated four-quarter loss fed to the solver
};

struct CoverageGap {
    Quarter quarter;
    std::string reason;
};

struct FactorSeriesResult {
    std::vector<FactorReading> readings;  // ascending by quarter
    std::vector<CoverageGap> gaps;
};

// Solver configuration. input_lead is the number of quarters between the
// reading quarter t and the snapshot supplying model inputs (the reporting
// convention anchors inputs at the midpoint of the loss window, lead 2).
struct FactorOptions {
    int input_lead = 2;
    math::SolveOptions solve;
};

// Allocated losses over the four quarters starting one before s = t + lag:
// ratio * (L(s-1) + L(s) + L(s+1) + L(s+2)), ratio = rwa_irb/rwa_credit at
// the anchor quarter (ProportionalRwa) or 1 (AllToIrb).
// Throws CoverageError naming the missing quarter.
double allocate_losses(const QuarterSeries& series, Quarter t, int lag,
                       LossAllocation allocation, const FactorOptions& opts = {});

// Solves the conditional-loss equation at the anchor snapshot (regulatory
// weights) for the unique y matching the allocated window losses.
// Throws InfeasibleError when the losses fall outside the attainable range.
FactorReading recover_factor(const QuarterSeries& series, Quarter t, int lag,
                             LossAllocation allocation, const FactorOptions& opts = {});

// One reading per quarter satisfying the coverage rule; quarters failing it
// are skipped and listed in the gap report.
FactorSeriesResult factor_series(const QuarterSeries& series, int lag,
                                 LossAllocation allocation,
                                 const FactorOptions& opts = {});

}  // namespace asrf::factor
