#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "asrf/types.hpp"

namespace asrf::mc {

// How an obligor's default indicator is drawn per scenario. AssetValue builds
// the latent asset value sqrt(rho) Y + sqrt(1-rho) eps and compares it to the
// default threshold Phi^-1(pd); Bernoulli compares a uniform draw directly to
// the conditional PD. The two are distributionally identical (KS-tested) but
// use distinct random streams.
enum class DefaultMechanism { AssetValue, Bernoulli };

struct SimConfig {
    std::uint64_t scenarios = 100000;
    std::uint64_t seed = 12345;
    std::uint64_t obligors_per_grade = 1;  // clones each pooled grade
    std::optional<double> conditional_y;   // fix Y instead of drawing it
    DefaultMechanism mechanism = DefaultMechanism::AssetValue;
    unsigned threads = 0;  // 0 = hardware concurrency; output is thread-count invariant
};

// Simulated portfolio loss distribution. The scenario-order sequence is the
// determinism contract (bit-identical for identical inputs on a fixed kernel);
// quantiles read the sorted view.
class LossDistribution {
  public:
    explicit LossDistribution(std::vector<double> losses_by_scenario);

    const std::vector<double>& by_scenario() const { return by_scenario_; }
    const std::vector<double>& sorted() const { return sorted_; }
    std::size_t size() const { return by_scenario_.size(); }
    double mean() const { return mean_; }
    double mean_std_error() const { return mean_se_; }

    // Lower empirical quantile: the ceil(alpha*N)-th order statistic,
    // matching the infimum definition of credit VaR.
    double quantile(double alpha) const;

  private:
    std::vector<double> by_scenario_;
    std::vector<double> sorted_;
    double mean_ = 0.0;
    double mean_se_ = 0.0;
};

// One-factor Gaussian-copula loss simulation of the snapshot's raw loss model
// (no maturity adjustment; the maturity multiplier is a capital convention,
// not part of the loss process). Deterministic for a fixed config and kernel.
LossDistribution simulate(const PortfolioSnapshot& snapshot, const SimConfig& config);

double empirical_var(const LossDistribution& dist, double alpha);

// Standard error of the alpha-quantile from contiguous scenario batches.
double batched_quantile_se(const LossDistribution& dist, double alpha,
                           std::size_t batches = 32);

struct ConvergenceRow {
    std::uint64_t clones;
    double mc_var;
    double mc_se;
    double asrf_value;     // conditional expected loss at Phi^-1(1-alpha)
    double relative_gap;   // (mc_var - asrf_value)/asrf_value
};

// Granularity study: the template grade is cloned n times per row and the
// empirical VaR is compared with the asymptotic value.
std::vector<ConvergenceRow> convergence_study(const ObligorGrade& grade_template,
                                              const std::vector<std::uint64_t>& clone_counts,
                                              const SimConfig& config, double alpha,
                                              std::size_t batches = 32);

}  // namespace asrf::mc
