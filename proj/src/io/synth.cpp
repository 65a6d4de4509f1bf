#include "asrf/io/synth.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/mc/rng.hpp"
#include "asrf/mc/simulate.hpp"

namespace asrf::io {

namespace {

struct ClassProfile {
    AssetClass cls;
    double ead_weight;  // share of the book
    double lgd;
};

// EAD mix echoing the reporting-form sector shares (household-heavy book).
constexpr std::array<ClassProfile, 7> kProfiles = {{
    {AssetClass::Corporate, 0.25, 0.45},
    {AssetClass::Sme, 0.10, 0.40},
    {AssetClass::Bank, 0.06, 0.45},
    {AssetClass::Sovereign, 0.04, 0.45},
    {AssetClass::ResidentialMortgage, 0.45, 0.20},
    {AssetClass::QualifiedRevolving, 0.05, 0.55},
    {AssetClass::OtherRetail, 0.05, 0.45},
}};

constexpr double kIrbCreditShare = 0.719;  // rwa_irb / rwa_credit
constexpr double kCreditTotalShare = 0.88; // rwa_credit / rwa_total
constexpr double kCapitalRatio = 0.11;     // capital_base / rwa_total
constexpr double kQuarterlyGrowth = 1.005;

void check_spec(const SynthSpec& spec) {
    if (spec.quarters < 1) throw ParameterError("synth: quarters must be >= 1");
    if (spec.grades_per_class < 1)
        throw ParameterError("synth: grades_per_class must be >= 1");
    if (spec.pd_band_edges.size() < 2)
        throw ParameterError("synth: need at least two pd band edges");
    for (std::size_t i = 0; i < spec.pd_band_edges.size(); ++i) {
        double e = spec.pd_band_edges[i];
        if (!(e > 0.0 && e < 1.0))
            throw ParameterError("synth: pd band edges must lie strictly in (0,1)");
        if (i && !(e > spec.pd_band_edges[i - 1]))
            throw ParameterError("synth: pd band edges must be strictly ascending");
    }
    if (!spec.base_y_path.empty() &&
        spec.base_y_path.size() != static_cast<std::size_t>(spec.quarters))
        throw ParameterError("synth: base_y_path length must equal quarters");
    if (!(spec.ead_scale > 0.0)) throw ParameterError("synth: ead_scale must be > 0");
    if (spec.noisy && spec.obligors_per_grade < 1)
        throw ParameterError("synth: obligors_per_grade must be >= 1");
}

PortfolioSnapshot make_snapshot(const SynthSpec& spec, int quarter_index) {
    PortfolioSnapshot snap;
    snap.as_of = spec.start + quarter_index;
    double growth = std::pow(kQuarterlyGrowth, quarter_index);
    std::size_t bands = spec.pd_band_edges.size() - 1;

    // per-slot weights decay harmonically and are normalised per class
    double slot_norm = 0.0;
    for (int j = 0; j < spec.grades_per_class; ++j) slot_norm += 1.0 / (1.0 + j);

    for (std::size_t ci = 0; ci < kProfiles.size(); ++ci) {
        const auto& prof = kProfiles[ci];
        for (int j = 0; j < spec.grades_per_class; ++j) {
            std::size_t band = (static_cast<std::size_t>(j) + ci) % bands;
            double lo = spec.pd_band_edges[band];
            double hi = spec.pd_band_edges[band + 1];
            ObligorGrade g;
            char id[64];
            std::snprintf(id, sizeof(id), "%s_%02d", to_string(prof.cls), j);
            g.id = id;
            g.asset_class = prof.cls;
            g.ead = spec.ead_scale * prof.ead_weight * (1.0 / (1.0 + j)) / slot_norm *
                    growth;
            g.lgd = prof.lgd;
            g.pd = std::sqrt(lo * hi);  // geometric band midpoint
            if (is_business_or_government(prof.cls))
                g.maturity_years = std::min(2.0 + 0.5 * j, 5.0);
            if (prof.cls == AssetClass::Sme) g.firm_size = 10.0 + 15.0 * j;
            snap.grades.push_back(std::move(g));
        }
    }
    return snap;
}

CapitalAccounts make_accounts(const PortfolioSnapshot& snap, int quarter_index) {
    CapitalAccounts acc;
    acc.as_of = snap.as_of;
    double k_reg = engine::regulatory_capital(snap).capital;
    double el_irb = engine::expected_loss(snap, engine::Mode::Regulatory);
    acc.rwa_irb = k_reg / 0.08;  // minimum capital is 8% of RWA
    acc.rwa_credit = acc.rwa_irb / kIrbCreditShare;
    acc.rwa_total = acc.rwa_credit / kCreditTotalShare;
    acc.non_irb_expected_loss = el_irb * (1.0 / kIrbCreditShare - 1.0);
    acc.provisions = el_irb + acc.non_irb_expected_loss;
    // capital ratio drifts gently around the base so per-quarter solvency
    // columns are not constant
    double ratio = kCapitalRatio + 0.005 * std::sin(quarter_index * 0.7);
    acc.capital_base = ratio * acc.rwa_total;
    return acc;
}

}  // namespace

std::vector<double> default_y_path(int quarters) {
    std::vector<double> path(static_cast<std::size_t>(quarters));
    double mid = (quarters - 1) / 2.0;
    for (int i = 0; i < quarters; ++i) {
        double z = (i - mid) / 2.5;
        path[static_cast<std::size_t>(i)] = 0.4 - 1.6 * std::exp(-0.5 * z * z);
    }
    return path;
}

QuarterSeries synthesize(const SynthSpec& spec) {
    check_spec(spec);
    std::vector<double> path =
        spec.base_y_path.empty() ? default_y_path(spec.quarters) : spec.base_y_path;

    QuarterSeries series;
    for (int i = 0; i < spec.quarters; ++i) {
        auto snap = make_snapshot(spec, i);
        series.accounts.emplace(snap.as_of, make_accounts(snap, i));
        series.snapshots.emplace(snap.as_of, std::move(snap));
    }

    // Window targets: the allocated four-quarter loss at t must equal the
    // conditional expected loss of the anchor snapshot at the path value, so
    // the per-quarter losses follow the recursion
    //   L(t+2) = window(t) - L(t-1) - L(t) - L(t+1).
    Quarter first_t = spec.start + 2;
    Quarter last_t = spec.start + (spec.quarters - 1);
    auto window_target = [&](Quarter t) {
        const auto& snap = series.snapshots.at(t - 2);
        const auto& acc = series.accounts.at(t - 2);
        double ratio = acc.rwa_irb / acc.rwa_credit;
        double y_star = path[static_cast<std::size_t>(t - spec.start)];
        auto prepared = engine::PreparedPortfolio::build(snap, engine::Mode::Regulatory);
        double target = prepared.conditional_loss(y_star);
        if (spec.noisy) {
            // Binomial noise from a single conditional scenario, rescaled from
            // the raw loss model onto the regulatory display level.
            mc::SimConfig mc_cfg;
            mc_cfg.scenarios = 1;
            mc_cfg.seed = mc::derive_key(spec.seed, static_cast<std::uint64_t>(t - spec.start));
            mc_cfg.obligors_per_grade = spec.obligors_per_grade;
            mc_cfg.conditional_y = y_star;
            mc_cfg.mechanism = mc::DefaultMechanism::Bernoulli;
            auto raw_prepared =
                engine::PreparedPortfolio::build(snap, engine::Mode::Raw);
            double raw_analytic = raw_prepared.conditional_loss(y_star);
            double raw_draw = mc::simulate(snap, mc_cfg).by_scenario()[0];
            target *= raw_draw / raw_analytic;
        }
        return target / ratio;
    };

    // Particular solution by forward recursion. Quarterly losses are indexed
    // k = 0 .. quarters+1 relative to the start quarter.
    std::size_t m = static_cast<std::size_t>(spec.quarters) + 2;
    std::vector<double> loss(m);
    double seed_loss = window_target(first_t) / 4.0;
    loss[0] = loss[1] = loss[2] = loss[3] = seed_loss;
    for (Quarter t = first_t; t <= last_t; ++t) {
        auto k = static_cast<std::size_t>(t - spec.start);
        loss[k + 2] = window_target(t) - loss[k - 1] - loss[k] - loss[k + 1];
    }

    // The window constraints leave a three-dimensional family of solutions
    // (4-periodic sequences with zero one-period sum), and the recursion
    // excites their undamped oscillation. Pick the member closest to the
    // per-quarter window share: minimise ||loss + H x - baseline||^2 over the
    // basis h1 = (-1)^k, h2 = cos(pi k/2), h3 = sin(pi k/2).
    {
        std::vector<double> baseline(m, 0.0);
        std::vector<double> window(m, 0.0);  // per reading quarter, index t-start
        for (Quarter t = first_t; t <= last_t; ++t)
            window[static_cast<std::size_t>(t - spec.start)] = window_target(t);
        for (std::size_t k = 0; k < m; ++k) {
            double sum = 0.0;
            int covering = 0;
            // quarter k lies in the window of readings t = k-2 .. k+1
            for (long t_idx = static_cast<long>(k) - 2; t_idx <= static_cast<long>(k) + 1;
                 ++t_idx) {
                if (t_idx >= first_t - spec.start && t_idx <= last_t - spec.start) {
                    sum += window[static_cast<std::size_t>(t_idx)];
                    ++covering;
                }
            }
            baseline[k] = covering ? sum / (4.0 * covering) : loss[k];
        }

        auto h = [](int mode, std::size_t k) {
            switch (mode) {
                case 0: return k % 2 ? -1.0 : 1.0;
                case 1: return k % 4 == 0 ? 1.0 : (k % 4 == 2 ? -1.0 : 0.0);
                default: return k % 4 == 1 ? 1.0 : (k % 4 == 3 ? -1.0 : 0.0);
            }
        };
        double ata[3][3] = {};
        double atb[3] = {};
        for (std::size_t k = 1; k < m; ++k) {  // k = 0 is rewritten below
            double resid = baseline[k] - loss[k];
            double hk[3] = {h(0, k), h(1, k), h(2, k)};
            for (int i = 0; i < 3; ++i) {
                atb[i] += hk[i] * resid;
                for (int j = 0; j < 3; ++j) ata[i][j] += hk[i] * hk[j];
            }
        }
        // 3x3 Gaussian elimination with partial pivoting
        double a[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) a[i][j] = ata[i][j];
            a[i][3] = atb[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
            for (int j = 0; j < 4; ++j) std::swap(a[piv][j], a[col][j]);
            if (std::fabs(a[col][col]) < 1e-30) continue;  // degenerate: skip mode
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                double f = a[r][col] / a[col][col];
                for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
            }
        }
        for (int i = 0; i < 3; ++i) {
            double xi = std::fabs(a[i][i]) < 1e-30 ? 0.0 : a[i][3] / a[i][i];
            for (std::size_t k = 0; k < m; ++k) loss[k] += xi * h(i, k);
        }
    }
    loss[0] = loss[1];  // unconstrained by any window; keep it unremarkable

    for (std::size_t k = 0; k < m; ++k) {
        if (!(loss[k] >= 0.0))
            throw ParameterError(
                "synth: base_y_path produces a negative quarterly loss at " +
                (spec.start + static_cast<int>(k)).iso_date() + "; smooth the path");
        Quarter q = spec.start + static_cast<int>(k);
        series.losses.emplace(q, LossRecord{q, loss[k]});
    }
    return series;
}

}  // namespace asrf::io
