#include "asrf/validate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace asrf {

namespace {

void check_grade(const ObligorGrade& g, Quarter q, std::vector<Violation>& out) {
    auto err = [&](const char* code, const std::string& msg) {
        out.push_back({Severity::Error, code, q, g.id, msg});
    };
    if (!(g.ead >= 0.0) || !std::isfinite(g.ead))
        err("grade.ead.range", "ead must be finite and >= 0");
    if (!(g.lgd >= 0.0 && g.lgd <= 1.0))
        err("grade.lgd.range", "lgd must lie in [0,1]");
    if (!(g.pd > 0.0 && g.pd < 1.0))
        err("grade.pd.range", "pd must lie strictly in (0,1)");
    if (g.rho_override && !(*g.rho_override > 0.0 && *g.rho_override < 1.0))
        err("grade.rho.range", "rho_override must lie strictly in (0,1)");
    bool wants_maturity = is_business_or_government(g.asset_class);
    if (wants_maturity && !g.maturity_years)
        err("grade.maturity.missing", "business/government grade requires maturity_years");
    if (!wants_maturity && g.maturity_years)
        err("grade.maturity.spurious", "retail grade must not carry maturity_years");
    if (g.maturity_years && !(*g.maturity_years > 0.0))
        err("grade.maturity.range", "maturity_years must be > 0");
    bool wants_size = g.asset_class == AssetClass::Sme;
    if (wants_size && !g.firm_size)
        err("grade.firm_size.missing", "SME grade requires firm_size");
    if (!wants_size && g.firm_size)
        err("grade.firm_size.spurious", "firm_size is only meaningful for SME grades");
    if (g.firm_size && !(*g.firm_size > 0.0))
        err("grade.firm_size.range", "firm_size must be > 0");
}

void check_accounts(const CapitalAccounts& a, std::vector<Violation>& out) {
    auto err = [&](const char* code, const std::string& msg) {
        out.push_back({Severity::Error, code, a.as_of, "", msg});
    };
    if (!(a.rwa_irb > 0.0))
        err("accounts.rwa.range", "rwa_irb must be > 0");
    if (!(a.rwa_irb <= a.rwa_credit && a.rwa_credit <= a.rwa_total))
        err("accounts.rwa.order", "requires rwa_irb <= rwa_credit <= rwa_total");
    if (!(a.provisions >= 0.0))
        err("accounts.provisions.range", "provisions must be >= 0");
    if (!(a.capital_base > 0.0))
        err("accounts.capital.range", "capital_base must be > 0");
    if (!(a.non_irb_expected_loss >= 0.0))
        err("accounts.non_irb_el.range", "non_irb_expected_loss must be >= 0");
}

template <class Map>
void check_contiguous(const Map& m, const char* code, const char* what,
                      std::vector<Violation>& out) {
    if (m.empty()) return;
    Quarter expected = m.begin()->first;
    for (const auto& [q, _] : m) {
        while (expected < q) {
            out.push_back({Severity::Error, code, expected, "",
                           std::string(what) + " missing for " + expected.iso_date()});
            ++expected;
        }
        ++expected;
    }
}

}  // namespace

std::vector<Violation> validate_series(const QuarterSeries& series) {
    std::vector<Violation> out;

    if (series.snapshots.empty())
        out.push_back({Severity::Error, "series.empty", std::nullopt, "",
                       "series has no snapshots"});

    for (const auto& [q, snap] : series.snapshots) {
        if (snap.as_of != q)
            out.push_back({Severity::Error, "snapshot.key.mismatch", q, "",
                           "snapshot as_of disagrees with its series key"});
        if (snap.grades.empty())
            out.push_back({Severity::Error, "snapshot.empty", q, "",
                           "snapshot has no grades"});
        std::set<std::string> seen;
        for (const auto& g : snap.grades) {
            if (!seen.insert(g.id).second)
                out.push_back({Severity::Error, "grade.id.duplicate", q, g.id,
                               "duplicate grade id within snapshot"});
            check_grade(g, q, out);
        }
        if (!series.accounts.count(q))
            out.push_back({Severity::Error, "accounts.missing", q, "",
                           "snapshot quarter has no matching accounts"});
    }

    for (const auto& [q, acc] : series.accounts) {
        (void)q;
        check_accounts(acc, out);
    }
    for (const auto& [q, rec] : series.losses) {
        if (!(rec.credit_loss >= 0.0))
            out.push_back({Severity::Error, "loss.range", q, "",
                           "credit_loss must be >= 0"});
    }

    check_contiguous(series.snapshots, "series.snapshots.gap", "snapshot", out);
    check_contiguous(series.losses, "series.losses.gap", "loss record", out);

    // Coverage rule: a reading at t is anchored at the t-2 snapshot and needs
    // losses over [t-1, t+2]. Flag every reported quarter whose window is
    // incomplete; boundary quarters are covered when losses extend two
    // quarters past the last snapshot (the canonical series shape).
    if (!series.snapshots.empty()) {
        Quarter first = series.snapshots.begin()->first;
        Quarter last = series.snapshots.rbegin()->first;
        for (Quarter t = first + 2; t <= last; ++t) {
            if (!series.snapshots.count(t - 2)) continue;  // gap already reported
            std::string missing;
            for (int k = -1; k <= 2; ++k) {
                if (!series.losses.count(t + k))
                    missing += (missing.empty() ? "" : ", ") + (t + k).iso_date();
            }
            if (!missing.empty())
                out.push_back({Severity::Warning, "coverage.window", t, "",
                               "factor reading at " + t.iso_date() +
                                   " is uncomputable; missing losses at " + missing});
        }
    }
    return out;
}

bool has_errors(const std::vector<Violation>& report) {
    return std::any_of(report.begin(), report.end(),
                       [](const Violation& v) { return v.severity == Severity::Error; });
}

std::string format_violation(const Violation& v) {
    std::string s = v.severity == Severity::Error ? "error [" : "warning [";
    s += v.code;
    s += "]";
    if (v.quarter) s += " " + v.quarter->iso_date();
    if (!v.subject.empty()) s += " " + v.subject;
    s += ": " + v.message;
    return s;
}

}  // namespace asrf
