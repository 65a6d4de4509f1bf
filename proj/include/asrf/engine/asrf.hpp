#pragma once

#include <vector>

#include "asrf/math/root_find.hpp"
#include "asrf/types.hpp"

namespace asrf::engine {

// Raw applies the plain conditional-loss weights ead*lgd; Regulatory applies
// the maturity adjustment on top (ead*lgd*nu) in both the conditional and the
// expected sum. The mode is always explicit, never inferred.
enum class Mode { Raw, Regulatory };

struct LossDecomposition {
    double expected_loss;     // mean loss over all scenarios
    double conditional_loss;  // conditional expected loss at factor_point
    double capital;           // conditional_loss - expected_loss
    double confidence;        // alpha
    double factor_point;      // adverse factor realisation, Phi^-1(1-alpha)
};

// Snapshot compiled to flat per-grade arrays for the kernels. Grade order is
// the snapshot's input order.
class PreparedPortfolio {
  public:
    static PreparedPortfolio build(const PortfolioSnapshot& snapshot, Mode mode);

    // sum_i w_i Phi((Phi^-1(pd_i) - sqrt(rho_i) y)/sqrt(1-rho_i)); strictly
    // decreasing in y.
    double conditional_loss(double y) const;
    double expected_loss() const { return expected_loss_; }

    double max_loss() const { return total_weight_; }  // y -> -inf limit
    double total_ead() const { return total_ead_; }
    std::size_t size() const { return weight_.size(); }
    Mode mode() const { return mode_; }

  private:
    std::vector<double> weight_;  // ead*lgd (raw) or ead*lgd*nu (regulatory)
    std::vector<double> a_;       // Phi^-1(pd)/sqrt(1-rho)
    std::vector<double> b_;       // sqrt(rho)/sqrt(1-rho)
    double total_weight_ = 0.0;
    double total_ead_ = 0.0;
    double expected_loss_ = 0.0;
    Mode mode_ = Mode::Raw;
};

// Vasicek transform of the unconditional PD (strictly decreasing in y).
// Strictly interior to (0,1) wherever the value is representable; beyond
// |argument| ~ 8.3 the double rounds to the boundary.
double conditional_pd(double pd, double rho, double y);

double conditional_expected_loss(const PortfolioSnapshot& snapshot, double y, Mode mode);

double expected_loss(const PortfolioSnapshot& snapshot, Mode mode);

// Unexpected-loss capital at confidence alpha: conditional expected loss at
// the adverse factor point minus expected loss. Throws DomainError for alpha
// outside (0,1).
LossDecomposition capital(const PortfolioSnapshot& snapshot, double alpha, Mode mode);

// IRB regulatory capital: capital at 99.9% with maturity adjustments applied
// to both sums.
LossDecomposition regulatory_capital(const PortfolioSnapshot& snapshot);

// Gap between the two algebraic forms of the conditional PD at the alpha
// tail: Phi((Phi^-1(p) - sqrt(rho) Phi^-1(1-alpha))/sqrt(1-rho)) versus
// Phi((Phi^-1(p) + sqrt(rho) Phi^-1(alpha))/sqrt(1-rho)). They agree up to
// rounding; tests pin the 1e-12 relative bound.
double symmetric_form_gap(double pd, double rho, double alpha);

// Solves conditional_loss(y) = target for the unique root (the curve is
// strictly decreasing). Throws InfeasibleError carrying the attainable
// interval when the target lies outside it on the bracket.
double solve_factor_for_loss(const PreparedPortfolio& prepared, double target,
                             const math::SolveOptions& opts, const char* context);

}  // namespace asrf::engine
