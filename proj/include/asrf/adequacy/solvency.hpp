#pragma once

#include "asrf/math/root_find.hpp"
#include "asrf/types.hpp"

namespace asrf::adequacy {

// Distance to default and the implied confidence level for one quarter.
struct SolvencyReading {
    Quarter quarter;
    double provisions_irb;        // Q_n: provisions allocated to IRB exposures
    double capital_irb;           // K_n: capital allocated to IRB exposures
    double capital_ratio;         // kappa = capital_base/rwa_total = K_n/rwa_irb
    double dtd;                   // distance to default, -y~
    double dtd_alpha;             // Phi(dtd)
    bool provisions_shortfall;    // Q_n below the one-year expected loss; the
                                  // engine flags it instead of deducting from
                                  // capital so pre-adjusted inputs are not
                                  // double-counted
};

// Weakest economic shock breaching a capital ratio floor.
struct StressReading {
    Quarter quarter;
    double floor_ratio;     // designated capital ratio floor
    double y_hat;           // weakest breaching realisation
    double alpha_hat;       // 1 - Phi(y_hat)
    double loss_threshold;  // Q_n + K_n - floor*rwa_irb
};

// Provisions allocated in proportion to projected one-year expected losses:
// Q_n = Q_r * EL_irb / (EL_irb + EL_non_irb), with EL_irb the regulatory
// one-year expected loss of the snapshot at t and EL_non_irb the reported
// scalar carried by the accounts.
double allocate_provisions(const QuarterSeries& series, Quarter t);

// Capital allocated in proportion to RWA: K_n = capital_base * rwa_irb/rwa_total.
double allocate_capital(const CapitalAccounts& accounts);

// Solves Q_n + K_n = conditional expected loss (regulatory weights, snapshot
// at t) for y~, and reports dtd = -y~ with alpha = Phi(dtd).
// Throws InfeasibleError when the resources exceed the attainable range.
SolvencyReading distance_to_default(const QuarterSeries& series, Quarter t,
                                    const math::SolveOptions& opts = {});

// Solves the same display at the loss threshold Q_n + K_n - floor*rwa_irb.
// floor = 0 reduces to the insolvency display (y_hat = -dtd).
StressReading reverse_stress(const QuarterSeries& series, Quarter t, double floor_ratio,
                             const math::SolveOptions& opts = {});

}  // namespace asrf::adequacy
