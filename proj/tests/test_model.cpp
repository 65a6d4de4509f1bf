#include <doctest.h>

#include "asrf/errors.hpp"
#include "asrf/io/synth.hpp"
#include "asrf/quarter.hpp"
#include "asrf/types.hpp"
#include "asrf/validate.hpp"
#include "helpers.hpp"

using namespace asrf;

TEST_SUITE_BEGIN("model");

TEST_CASE("quarter parsing accepts only calendar quarter ends") {
    CHECK(Quarter::parse("2008-03-31") == Quarter(2008, 1));
    CHECK(Quarter::parse("2008-06-30") == Quarter(2008, 2));
    CHECK(Quarter::parse("2008-09-30") == Quarter(2008, 3));
    CHECK(Quarter::parse("2008-12-31") == Quarter(2008, 4));
    CHECK_THROWS_AS(Quarter::parse("2008-03-30"), ParseError);
    CHECK_THROWS_AS(Quarter::parse("2008-05-31"), ParseError);
    CHECK_THROWS_AS(Quarter::parse("2008-3-31"), ParseError);
    CHECK_THROWS_AS(Quarter::parse("garbage"), ParseError);
}

TEST_CASE("quarter arithmetic moves whole quarters") {
    Quarter q(2008, 4);
    CHECK((q + 1) == Quarter(2009, 1));
    CHECK((q - 4) == Quarter(2007, 4));
    CHECK((q + 1) - q == 1);
    CHECK(Quarter(2013, 2) - Quarter(2008, 1) == 21);  // Mar-2008 .. Jun-2013 span
    CHECK(q.iso_date() == "2008-12-31");
    CHECK((q + 2).iso_date() == "2009-06-30");
}

namespace {
// canonical well-formed series: N snapshot quarters, losses extending two
// quarters past the last snapshot so every reading window is covered
QuarterSeries well_formed(int quarters) {
    io::SynthSpec spec;
    spec.quarters = quarters;
    return io::synthesize(spec);
}
}  // namespace

TEST_CASE("well-formed six-quarter series validates cleanly") {
    auto series = well_formed(6);
    auto report = validate_series(series);
    CHECK(report.empty());
}

TEST_CASE("missing forward loss flags the dependent reading quarter") {
    auto series = well_formed(6);
    // drop the final loss record: the last reading t needs losses at t+2
    Quarter last_loss = series.losses.rbegin()->first;
    series.losses.erase(last_loss);
    auto report = validate_series(series);
    REQUIRE(!report.empty());
    CHECK(!has_errors(report));  // coverage gaps warn, they do not hard-fail
    bool found = false;
    for (const auto& v : report) {
        if (v.code == "coverage.window" && v.quarter == last_loss - 2) found = true;
    }
    CHECK(found);
}

TEST_CASE("pd at the boundary is an invariant violation naming the grade") {
    auto series = well_formed(6);
    series.snapshots.begin()->second.grades[0].pd = 0.0;
    auto report = validate_series(series);
    CHECK(has_errors(report));
    bool found = false;
    for (const auto& v : report)
        if (v.code == "grade.pd.range" &&
            v.subject == series.snapshots.begin()->second.grades[0].id)
            found = true;
    CHECK(found);
}

TEST_CASE("duplicate grade ids are rejected") {
    auto series = well_formed(4);
    auto& grades = series.snapshots.begin()->second.grades;
    grades.push_back(grades.front());
    auto report = validate_series(series);
    CHECK(has_errors(report));
    bool found = false;
    for (const auto& v : report)
        if (v.code == "grade.id.duplicate") found = true;
    CHECK(found);
}

TEST_CASE("class-conditional fields are enforced") {
    auto series = well_formed(4);
    auto& grades = series.snapshots.begin()->second.grades;

    auto count_code = [&](const char* code) {
        int n = 0;
        for (const auto& v : validate_series(series))
            if (v.code == code) ++n;
        return n;
    };

    // retail grade with a maturity
    for (auto& g : grades)
        if (g.asset_class == AssetClass::ResidentialMortgage) {
            g.maturity_years = 3.0;
            break;
        }
    CHECK(count_code("grade.maturity.spurious") == 1);

    // SME grade without firm size
    for (auto& g : grades)
        if (g.asset_class == AssetClass::Sme) {
            g.firm_size.reset();
            break;
        }
    CHECK(count_code("grade.firm_size.missing") == 1);
}

TEST_CASE("account ordering invariant") {
    auto series = well_formed(4);
    auto& acc = series.accounts.begin()->second;
    acc.rwa_credit = acc.rwa_total * 2.0;  // breaks rwa_credit <= rwa_total
    auto report = validate_series(series);
    CHECK(has_errors(report));
}

TEST_CASE("snapshot gaps are contiguity errors") {
    auto series = well_formed(6);
    Quarter third = series.snapshots.begin()->first + 2;
    series.snapshots.erase(third);
    series.accounts.erase(third);
    auto report = validate_series(series);
    CHECK(has_errors(report));
    bool found = false;
    for (const auto& v : report)
        if (v.code == "series.snapshots.gap" && v.quarter == third) found = true;
    CHECK(found);
}

TEST_SUITE_END();
