#include "asrf/engine/asrf.hpp"

#include <cmath>

#include "asrf/basel/params.hpp"
#include "asrf/errors.hpp"
#include "asrf/kernels/kernels.hpp"
#include "asrf/math/normal.hpp"

namespace asrf::engine {

namespace {
void check_pd(double pd) {
    if (!(pd > 0.0 && pd < 1.0))
        throw DomainError("pd must lie strictly in (0,1)");
}
void check_rho(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw DomainError("rho must lie strictly in (0,1)");
}
}  // namespace

PreparedPortfolio PreparedPortfolio::build(const PortfolioSnapshot& snapshot, Mode mode) {
    PreparedPortfolio p;
    p.mode_ = mode;
    std::size_t n = snapshot.grades.size();
    p.weight_.reserve(n);
    p.a_.reserve(n);
    p.b_.reserve(n);
    double el = 0.0, el_c = 0.0;       // Kahan pairs
    double tw = 0.0, tw_c = 0.0;
    double te = 0.0, te_c = 0.0;
    auto kahan_add = [](double& sum, double& carry, double term) {
        double t = term - carry;
        double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    };
    for (const auto& g : snapshot.grades) {
        check_pd(g.pd);
        auto params = basel::resolve(g);
        double nu = mode == Mode::Regulatory ? params.maturity_adjustment : 1.0;
        double w = g.ead * g.lgd * nu;
        double s1mr = std::sqrt(1.0 - params.rho);
        p.weight_.push_back(w);
        p.a_.push_back(math::norm_quantile_unchecked(g.pd) / s1mr);
        p.b_.push_back(std::sqrt(params.rho) / s1mr);
        kahan_add(el, el_c, w * g.pd);
        kahan_add(tw, tw_c, w);
        kahan_add(te, te_c, g.ead);
    }
    p.expected_loss_ = el;
    p.total_weight_ = tw;
    p.total_ead_ = te;
    return p;
}

double PreparedPortfolio::conditional_loss(double y) const {
    return kernels::active().conditional_loss(weight_.data(), a_.data(), b_.data(),
                                              weight_.size(), y);
}

double conditional_pd(double pd, double rho, double y) {
    check_pd(pd);
    check_rho(rho);
    if (!std::isfinite(y)) throw DomainError("conditional_pd: non-finite y");
    double s1mr = std::sqrt(1.0 - rho);
    return math::norm_cdf_unchecked(
        (math::norm_quantile_unchecked(pd) - std::sqrt(rho) * y) / s1mr);
}

double conditional_expected_loss(const PortfolioSnapshot& snapshot, double y, Mode mode) {
    if (!std::isfinite(y)) throw DomainError("conditional_expected_loss: non-finite y");
    return PreparedPortfolio::build(snapshot, mode).conditional_loss(y);
}

double expected_loss(const PortfolioSnapshot& snapshot, Mode mode) {
    return PreparedPortfolio::build(snapshot, mode).expected_loss();
}

LossDecomposition capital(const PortfolioSnapshot& snapshot, double alpha, Mode mode) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("capital: alpha must lie strictly in (0,1)");
    auto prepared = PreparedPortfolio::build(snapshot, mode);
    // Evaluate at -Phi^-1(alpha): Phi(a - b*(-Phi^-1(alpha))) is the
    // +sqrt(rho) Phi^-1(alpha) form of the capital sum.
    double factor_point = -math::norm_quantile_unchecked(alpha) + 0.0;
    double cond = prepared.conditional_loss(factor_point);
    double el = prepared.expected_loss();
    return {el, cond, cond - el, alpha, factor_point};
}

LossDecomposition regulatory_capital(const PortfolioSnapshot& snapshot) {
    return capital(snapshot, 0.999, Mode::Regulatory);
}

double solve_factor_for_loss(const PreparedPortfolio& prepared, double target,
                             const math::SolveOptions& opts, const char* context) {
    double hi_loss = prepared.conditional_loss(opts.bracket_lo);  // worst economy
    double lo_loss = prepared.conditional_loss(opts.bracket_hi);  // best economy
    double f_lo = hi_loss - target;
    double f_hi = lo_loss - target;
    if (f_lo == 0.0) return opts.bracket_lo;
    if (f_hi == 0.0) return opts.bracket_hi;
    if ((f_lo < 0.0) == (f_hi < 0.0))
        throw InfeasibleError(
            std::string(context) + ": target loss " + std::to_string(target) +
                " outside the attainable conditional-loss range (" +
                std::to_string(lo_loss) + ", " + std::to_string(hi_loss) +
                ") on bracket [" + std::to_string(opts.bracket_lo) + ", " +
                std::to_string(opts.bracket_hi) + "]",
            lo_loss, hi_loss);
    auto f = [&](double y) { return prepared.conditional_loss(y) - target; };
    return math::find_root_monotone(f, opts.bracket_lo, opts.bracket_hi, opts.tol);
}

double symmetric_form_gap(double pd, double rho, double alpha) {
    check_pd(pd);
    check_rho(rho);
    double s1mr = std::sqrt(1.0 - rho);
    double sr = std::sqrt(rho);
    double q = math::norm_quantile_unchecked(pd);
    double minus_form = math::norm_cdf_unchecked(
        (q - sr * math::norm_quantile_unchecked(1.0 - alpha)) / s1mr);
    double plus_form = math::norm_cdf_unchecked(
        (q + sr * math::norm_quantile_unchecked(alpha)) / s1mr);
    return minus_form - plus_form;
}

}  // namespace asrf::engine
