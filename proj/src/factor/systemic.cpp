#include "asrf/factor/systemic.hpp"

#include <cmath>

#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/math/normal.hpp"

namespace asrf::factor {

namespace {

void check_lag(int lag) {
    if (lag < 0 || lag > 2)
        throw ParameterError("recognition lag must lie in {0,1,2}, got " +
                             std::to_string(lag));
}

const PortfolioSnapshot& snapshot_at(const QuarterSeries& series, Quarter q) {
    auto it = series.snapshots.find(q);
    if (it == series.snapshots.end())
        throw CoverageError("no snapshot at " + q.iso_date());
    return it->second;
}

const CapitalAccounts& accounts_at(const QuarterSeries& series, Quarter q) {
    auto it = series.accounts.find(q);
    if (it == series.accounts.end())
        throw CoverageError("no accounts at " + q.iso_date());
    return it->second;
}

double loss_at(const QuarterSeries& series, Quarter q) {
    auto it = series.losses.find(q);
    if (it == series.losses.end())
        throw CoverageError("no loss record at " + q.iso_date());
    return it->second.credit_loss;
}

}  // namespace

const char* to_string(LossAllocation a) {
    return a == LossAllocation::ProportionalRwa ? "proportional-rwa" : "all-to-irb";
}

LossAllocation allocation_from_string(const std::string& s) {
    if (s == "proportional-rwa") return LossAllocation::ProportionalRwa;
    if (s == "all-to-irb") return LossAllocation::AllToIrb;
    throw ParseError("unknown loss allocation '" + s + "'");
}

double allocate_losses(const QuarterSeries& series, Quarter t, int lag,
                       LossAllocation allocation, const FactorOptions& opts) {
    check_lag(lag);
    Quarter anchor = t - opts.input_lead;
    double ratio = 1.0;
    if (allocation == LossAllocation::ProportionalRwa) {
        const auto& acc = accounts_at(series, anchor);
        ratio = acc.rwa_irb / acc.rwa_credit;
    }
    Quarter s = t + lag;
    double window = 0.0;
    for (int k = -1; k <= 2; ++k) window += loss_at(series, s + k);
    return ratio * window;
}

FactorReading recover_factor(const QuarterSeries& series, Quarter t, int lag,
                             LossAllocation allocation, const FactorOptions& opts) {
    check_lag(lag);
    Quarter anchor = t - opts.input_lead;
    const auto& snapshot = snapshot_at(series, anchor);
    double losses = allocate_losses(series, t, lag, allocation, opts);
    auto prepared = engine::PreparedPortfolio::build(snapshot, engine::Mode::Regulatory);
    double y = engine::solve_factor_for_loss(prepared, losses, opts.solve,
                                             "recover_factor");
    return {t, y, 1.0 - math::norm_cdf_unchecked(y), lag, allocation, losses};
}

FactorSeriesResult factor_series(const QuarterSeries& series, int lag,
                                 LossAllocation allocation, const FactorOptions& opts) {
    check_lag(lag);
    FactorSeriesResult result;
    if (series.snapshots.empty()) return result;
    // Readings are attempted for reported quarters t whose anchor snapshot
    // t - input_lead exists; the loss window may extend past the snapshots.
    Quarter first = series.snapshots.begin()->first + opts.input_lead;
    Quarter last = series.snapshots.rbegin()->first;
    for (Quarter t = first; t <= last; ++t) {
        try {
            result.readings.push_back(recover_factor(series, t, lag, allocation, opts));
        } catch (const CoverageError& e) {
            result.gaps.push_back({t, e.what()});
        } catch (const InfeasibleError& e) {
            result.gaps.push_back({t, e.what()});
        }
    }
    return result;
}

}  // namespace asrf::factor
