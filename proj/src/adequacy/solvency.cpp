#include "asrf/adequacy/solvency.hpp"

#include <cmath>

#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/math/normal.hpp"
#include "asrf/math/root_find.hpp"

namespace asrf::adequacy {

namespace {

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

}  // namespace

double allocate_provisions(const QuarterSeries& series, Quarter t) {
    const auto& acc = accounts_at(series, t);
    const auto& snap = snapshot_at(series, t);
    double el_irb = engine::expected_loss(snap, engine::Mode::Regulatory);
    double denom = el_irb + acc.non_irb_expected_loss;
    if (!(denom > 0.0)) return 0.0;  // degenerate book with no projected losses
    return acc.provisions * (el_irb / denom);
}

double allocate_capital(const CapitalAccounts& accounts) {
    return accounts.capital_base * (accounts.rwa_irb / accounts.rwa_total);
}

SolvencyReading distance_to_default(const QuarterSeries& series, Quarter t,
                                    const math::SolveOptions& opts) {
    const auto& acc = accounts_at(series, t);
    const auto& snap = snapshot_at(series, t);
    auto prepared = engine::PreparedPortfolio::build(snap, engine::Mode::Regulatory);

    double q_n = allocate_provisions(series, t);
    double k_n = allocate_capital(acc);
    double y = engine::solve_factor_for_loss(prepared, q_n + k_n, opts, "distance_to_default");
    double dtd = -y + 0.0;
    return {t,
            q_n,
            k_n,
            acc.capital_base / acc.rwa_total,
            dtd,
            math::norm_cdf_unchecked(dtd),
            q_n < prepared.expected_loss()};
}

StressReading reverse_stress(const QuarterSeries& series, Quarter t, double floor_ratio,
                             const math::SolveOptions& opts) {
    if (!(floor_ratio >= 0.0))
        throw ParameterError("capital ratio floor must be >= 0");
    const auto& acc = accounts_at(series, t);
    const auto& snap = snapshot_at(series, t);
    auto prepared = engine::PreparedPortfolio::build(snap, engine::Mode::Regulatory);

    double q_n = allocate_provisions(series, t);
    double k_n = allocate_capital(acc);
    double threshold = q_n + k_n - floor_ratio * acc.rwa_irb;
    if (!(threshold > 0.0))
        throw InfeasibleError(
            "reverse_stress: floor " + std::to_string(floor_ratio) +
                " leaves a non-positive loss threshold " + std::to_string(threshold),
            0.0, prepared.max_loss());
    double y_hat = engine::solve_factor_for_loss(prepared, threshold, opts, "reverse_stress");
    return {t, floor_ratio, y_hat, 1.0 - math::norm_cdf_unchecked(y_hat), threshold};
}

}  // namespace asrf::adequacy
