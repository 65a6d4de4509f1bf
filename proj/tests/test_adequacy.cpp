#include <doctest.h>

#include <cmath>

#include "asrf/adequacy/solvency.hpp"
#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/io/synth.hpp"
#include "asrf/math/normal.hpp"
#include "helpers.hpp"

using namespace asrf;

TEST_SUITE_BEGIN("adequacy");

namespace {

QuarterSeries synth_series(int quarters = 8) {
    io::SynthSpec spec;
    spec.quarters = quarters;
    return io::synthesize(spec);
}

// series with one quarter and fully pinned accounts
QuarterSeries pinned_series(double rwa_irb, double rwa_credit, double rwa_total,
                            double provisions, double capital_base, double non_irb_el) {
    QuarterSeries s;
    Quarter q(2008, 4);
    auto snap = testutil::random_book(101, 2, q);
    s.snapshots.emplace(q, snap);
    CapitalAccounts acc{q, rwa_irb, rwa_credit, rwa_total, provisions, capital_base,
                        non_irb_el};
    s.accounts.emplace(q, acc);
    return s;
}

}  // namespace

TEST_CASE("allocate_capital: proportional RWA split") {
    CapitalAccounts acc{Quarter(2008, 4), 60.0, 80.0, 100.0, 2.0, 50.0, 1.0};
    CHECK(adequacy::allocate_capital(acc) == doctest::Approx(30.0).epsilon(1e-14));
    acc.rwa_irb = acc.rwa_credit = acc.rwa_total;
    CHECK(adequacy::allocate_capital(acc) == doctest::Approx(50.0).epsilon(1e-14));
}

TEST_CASE("capital ratio identity: K_n/R_n equals K/R") {
    // kappa quoted at the Dec-2008 level of the solvency table
    CapitalAccounts acc{Quarter(2008, 4), 60.0, 80.0, 100.0, 2.0, 11.51, 1.0};
    double k_n = adequacy::allocate_capital(acc);
    CHECK(k_n == doctest::Approx(6.906).epsilon(1e-12));
    CHECK(k_n / acc.rwa_irb ==
          doctest::Approx(acc.capital_base / acc.rwa_total).epsilon(1e-12));
    // identity holds across random account shapes
    testutil::Rng rng(55);
    for (int i = 0; i < 200; ++i) {
        CapitalAccounts a;
        a.as_of = Quarter(2009, 1);
        a.rwa_irb = rng.uniform(1.0, 500.0);
        a.rwa_credit = a.rwa_irb + rng.uniform(0.0, 200.0);
        a.rwa_total = a.rwa_credit + rng.uniform(0.0, 200.0);
        a.capital_base = rng.uniform(0.5, 80.0);
        double ratio_direct = a.capital_base / a.rwa_total;
        double ratio_alloc = adequacy::allocate_capital(a) / a.rwa_irb;
        CHECK(std::fabs(ratio_alloc - ratio_direct) <= 1e-12 * ratio_direct);
    }
}

TEST_CASE("allocate_provisions: proportional to projected expected losses") {
    // IRB EL 60, non-IRB EL 40, provisions 10 -> 6
    QuarterSeries s = pinned_series(60.0, 80.0, 100.0, 10.0, 50.0, 0.0);
    Quarter q = s.snapshots.begin()->first;
    double el_irb = engine::expected_loss(s.snapshots.at(q), engine::Mode::Regulatory);
    s.accounts.at(q).non_irb_expected_loss = el_irb * (40.0 / 60.0);
    CHECK(adequacy::allocate_provisions(s, q) == doctest::Approx(6.0).epsilon(1e-12));

    // degenerate: only IRB expectations -> everything allocated
    s.accounts.at(q).non_irb_expected_loss = 0.0;
    CHECK(adequacy::allocate_provisions(s, q) == doctest::Approx(10.0).epsilon(1e-12));

    // zero provisions -> zero allocation
    s.accounts.at(q).provisions = 0.0;
    CHECK(adequacy::allocate_provisions(s, q) == 0.0);
}

TEST_CASE("distance to default: confidence mappings from the solvency table") {
    // alpha~ = Phi(d~) at the printed precision of the reference table
    CHECK(math::norm_cdf(3.588) == doctest::Approx(0.99983).epsilon(5e-6));
    CHECK(math::norm_cdf(3.504) == doctest::Approx(0.99977).epsilon(5e-6));
    // and through a constructed reading: resources chosen so dtd = 3.588
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    auto prepared =
        engine::PreparedPortfolio::build(s.snapshots.at(q), engine::Mode::Regulatory);
    double resources = prepared.conditional_loss(-3.588);
    auto& acc = s.accounts.at(q);
    // zero provisions; capital base set so K_n equals the target resources
    acc.provisions = 0.0;
    acc.capital_base = resources * acc.rwa_total / acc.rwa_irb;
    auto reading = adequacy::distance_to_default(s, q);
    CHECK(reading.dtd == doctest::Approx(3.588).epsilon(1e-9));
    CHECK(reading.dtd_alpha == doctest::Approx(0.99983).epsilon(1e-5));
    CHECK(std::fabs(reading.dtd_alpha - math::norm_cdf(reading.dtd)) <= 1e-10);
}

TEST_CASE("distance to default: synthetic round trip") {
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    auto prepared =
        engine::PreparedPortfolio::build(s.snapshots.at(q), engine::Mode::Regulatory);
    auto& acc = s.accounts.at(q);
    acc.provisions = 0.0;
    acc.capital_base = prepared.conditional_loss(-3.5) * acc.rwa_total / acc.rwa_irb;
    auto reading = adequacy::distance_to_default(s, q);
    CHECK(reading.dtd == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("distance to default on the synthetic series is well capitalised") {
    auto s = synth_series();
    for (const auto& [q, snap] : s.snapshots) {
        (void)snap;
        auto r = adequacy::distance_to_default(s, q);
        CHECK(r.dtd > 2.5);
        CHECK(r.dtd < 6.0);
        CHECK(r.dtd_alpha > 0.99);
        CHECK(!r.provisions_shortfall);  // generator provisions exactly cover EL
        CHECK(r.capital_ratio ==
              doctest::Approx(s.accounts.at(q).capital_base / s.accounts.at(q).rwa_total));
    }
}

TEST_CASE("provisions shortfall is flagged, not deducted") {
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    s.accounts.at(q).provisions = 0.0;  // below the one-year EL
    auto r = adequacy::distance_to_default(s, q);
    CHECK(r.provisions_shortfall);
}

TEST_CASE("infeasible resources raise instead of emitting a sentinel") {
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    auto prepared =
        engine::PreparedPortfolio::build(s.snapshots.at(q), engine::Mode::Regulatory);
    auto& acc = s.accounts.at(q);
    acc.capital_base = prepared.max_loss() * 1.5 * acc.rwa_total / acc.rwa_irb;
    CHECK_THROWS_AS(adequacy::distance_to_default(s, q), InfeasibleError);
}

TEST_CASE("reverse stress: floor zero reduces to the insolvency display") {
    auto s = synth_series();
    for (const auto& [q, snap] : s.snapshots) {
        (void)snap;
        auto dtd = adequacy::distance_to_default(s, q);
        auto stress = adequacy::reverse_stress(s, q, 0.0);
        CHECK(stress.y_hat == -dtd.dtd);  // identical solver, identical root
        CHECK(stress.loss_threshold ==
              doctest::Approx(dtd.provisions_irb + dtd.capital_irb).epsilon(1e-14));
    }
}

TEST_CASE("reverse stress: confidence mappings at the table's floors") {
    CHECK(1.0 - math::norm_cdf(-3.044) == doctest::Approx(0.99883).epsilon(5e-6));
    CHECK(1.0 - math::norm_cdf(-2.17) == doctest::Approx(0.9849).epsilon(3.1e-4));
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    auto r = adequacy::reverse_stress(s, q, 0.04);
    CHECK(std::fabs(r.alpha_hat - (1.0 - math::norm_cdf(r.y_hat))) <= 1e-10);
    CHECK(r.loss_threshold ==
          doctest::Approx(adequacy::allocate_provisions(s, q) +
                          adequacy::allocate_capital(s.accounts.at(q)) -
                          0.04 * s.accounts.at(q).rwa_irb)
              .epsilon(1e-12));
}

TEST_CASE("higher floors are breached by weaker shocks") {
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    double prev = -100.0;
    for (double floor : {0.0, 0.02, 0.04, 0.06, 0.08}) {
        auto r = adequacy::reverse_stress(s, q, floor);
        CHECK(r.y_hat - prev > 1e-12);  // strictly increasing in the floor
        prev = r.y_hat;
    }
}

TEST_CASE("infeasible floors raise") {
    auto s = synth_series();
    Quarter q = s.snapshots.begin()->first;
    // a floor at the full capital ratio leaves nothing to absorb losses
    CHECK_THROWS_AS(adequacy::reverse_stress(s, q, 5.0), InfeasibleError);
    CHECK_THROWS_AS(adequacy::reverse_stress(s, q, -0.01), ParameterError);
}

TEST_SUITE_END();
