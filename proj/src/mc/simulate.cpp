#include "asrf/mc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "asrf/basel/params.hpp"
#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/kernels/kernels.hpp"
#include "asrf/math/normal.hpp"
#include "asrf/mc/rng.hpp"

namespace asrf::mc {

namespace {

struct GradeDraw {
    double unit_loss;     // ead/m * lgd per defaulted clone
    double pd;
    double sqrt_rho;
    double sqrt_1m_rho;
    double threshold;     // Phi^-1(pd)
};

std::vector<GradeDraw> prepare_grades(const PortfolioSnapshot& snapshot,
                                      std::uint64_t obligors_per_grade) {
    std::vector<GradeDraw> out;
    out.reserve(snapshot.grades.size());
    for (const auto& g : snapshot.grades) {
        if (!(g.pd > 0.0 && g.pd < 1.0))
            throw DomainError("simulate: pd must lie strictly in (0,1)");
        double rho = basel::resolve(g).rho;
        out.push_back({g.ead / static_cast<double>(obligors_per_grade) * g.lgd,
                       g.pd, std::sqrt(rho), std::sqrt(1.0 - rho),
                       math::norm_quantile_unchecked(g.pd)});
    }
    return out;
}

}  // namespace

LossDistribution::LossDistribution(std::vector<double> losses_by_scenario)
    : by_scenario_(std::move(losses_by_scenario)) {
    sorted_ = by_scenario_;
    std::sort(sorted_.begin(), sorted_.end());
    // mean and its standard error over the scenario-order sequence
    double sum = 0.0, carry = 0.0;
    for (double v : by_scenario_) {
        double t = v - carry;
        double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
    std::size_t n = by_scenario_.size();
    mean_ = n ? sum / static_cast<double>(n) : 0.0;
    double var = 0.0;
    for (double v : by_scenario_) var += (v - mean_) * (v - mean_);
    mean_se_ = n > 1 ? std::sqrt(var / (static_cast<double>(n) - 1.0) /
                                 static_cast<double>(n))
                     : 0.0;
}

double LossDistribution::quantile(double alpha) const {
    if (sorted_.empty()) throw DomainError("quantile of an empty distribution");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("quantile: alpha must lie in [0,1]");
    double t = alpha * static_cast<double>(sorted_.size());
    // tiny guard against an integral product landing one ulp high
    auto k = static_cast<std::size_t>(std::ceil(t - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
}

LossDistribution simulate(const PortfolioSnapshot& snapshot, const SimConfig& config) {
    if (config.scenarios < 1) throw ParameterError("simulate: scenarios must be >= 1");
    if (config.obligors_per_grade < 1)
        throw ParameterError("simulate: obligors_per_grade must be >= 1");
    if (config.conditional_y && !std::isfinite(*config.conditional_y))
        throw ParameterError("simulate: conditional_y must be finite");

    const auto grades = prepare_grades(snapshot, config.obligors_per_grade);
    const std::uint64_t m = config.obligors_per_grade;
    const std::uint64_t n_grades = grades.size();
    const std::uint64_t scenario_stride = n_grades * m;

    const std::uint64_t key_scenario = derive_key(config.seed, kStreamScenario);
    const std::uint64_t key_defaults =
        derive_key(config.seed, config.mechanism == DefaultMechanism::Bernoulli
                                    ? kStreamBernoulli
                                    : kStreamAssetValue);

    const auto& ops = kernels::active();
    std::vector<double> losses(config.scenarios);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t s = begin; s < end; ++s) {
            double y = config.conditional_y
                           ? *config.conditional_y
                           : math::norm_quantile_unchecked(uniform_at(key_scenario, s));
            double loss = 0.0;
            std::uint64_t ctr = s * scenario_stride;
            for (std::uint64_t g = 0; g < n_grades; ++g, ctr += m) {
                const auto& gd = grades[g];
                std::uint64_t defaults;
                if (config.mechanism == DefaultMechanism::Bernoulli) {
                    double pc = math::norm_cdf_unchecked(
                        (gd.threshold - gd.sqrt_rho * y) / gd.sqrt_1m_rho);
                    defaults = ops.count_defaults_bernoulli(key_defaults, ctr, m, pc);
                } else {
                    defaults = ops.count_defaults_asset_value(
                        key_defaults, ctr, m, gd.sqrt_rho * y, gd.sqrt_1m_rho,
                        gd.threshold);
                }
                loss += static_cast<double>(defaults) * gd.unit_loss;
            }
            losses[s] = loss;
        }
    };

    unsigned threads = config.threads ? config.threads
                                      : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, config.scenarios));
    if (threads <= 1) {
        run_range(0, config.scenarios);
    } else {
        // scenarios write disjoint slots, so partitioning cannot change output
        std::vector<std::thread> pool;
        pool.reserve(threads);
        std::uint64_t chunk = (config.scenarios + threads - 1) / threads;
        for (unsigned ti = 0; ti < threads; ++ti) {
            std::uint64_t begin = ti * chunk;
            std::uint64_t end = std::min(begin + chunk, config.scenarios);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return LossDistribution(std::move(losses));
}

double empirical_var(const LossDistribution& dist, double alpha) {
    return dist.quantile(alpha);
}

double batched_quantile_se(const LossDistribution& dist, double alpha,
                           std::size_t batches) {
    const auto& seq = dist.by_scenario();
    if (batches < 2 || seq.size() < batches) return 0.0;
    std::size_t per = seq.size() / batches;  // trailing remainder ignored
    std::vector<double> batch_vars;
    batch_vars.reserve(batches);
    std::vector<double> scratch(per);
    for (std::size_t b = 0; b < batches; ++b) {
        auto first = seq.begin() + static_cast<std::ptrdiff_t>(b * per);
        std::copy(first, first + static_cast<std::ptrdiff_t>(per), scratch.begin());
        std::sort(scratch.begin(), scratch.end());
        double t = alpha * static_cast<double>(per);
        auto k = static_cast<std::size_t>(std::ceil(t - 1e-9));
        k = std::clamp<std::size_t>(k, 1, per);
        batch_vars.push_back(scratch[k - 1]);
    }
    double mean = 0.0;
    for (double v : batch_vars) mean += v;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double v : batch_vars) var += (v - mean) * (v - mean);
    var /= static_cast<double>(batches - 1);
    return std::sqrt(var / static_cast<double>(batches));
}

std::vector<ConvergenceRow> convergence_study(const ObligorGrade& grade_template,
                                              const std::vector<std::uint64_t>& clone_counts,
                                              const SimConfig& config, double alpha,
                                              std::size_t batches) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("convergence_study: alpha must lie strictly in (0,1)");
    for (std::size_t i = 1; i < clone_counts.size(); ++i)
        if (clone_counts[i] <= clone_counts[i - 1])
            throw ParameterError("convergence_study: clone counts must be increasing");

    PortfolioSnapshot snapshot{Quarter(2008, 1), {grade_template}};
    double asrf_value = engine::conditional_expected_loss(
        snapshot, math::norm_quantile(1.0 - alpha), engine::Mode::Raw);

    std::vector<ConvergenceRow> rows;
    rows.reserve(clone_counts.size());
    for (std::uint64_t n : clone_counts) {
        SimConfig c = config;
        c.obligors_per_grade = n;
        auto dist = simulate(snapshot, c);
        double var = empirical_var(dist, alpha);
        rows.push_back({n, var, batched_quantile_se(dist, alpha, batches), asrf_value,
                        (var - asrf_value) / asrf_value});
    }
    return rows;
}

}  // namespace asrf::mc
