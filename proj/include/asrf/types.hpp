#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asrf/quarter.hpp"
#include "asrf/unit_interval.hpp"

namespace asrf {

// IRB asset classes as reported on credit risk forms.
enum class AssetClass {
    Corporate,
    Sme,
    Bank,
    Sovereign,
    ResidentialMortgage,
    QualifiedRevolving,
    OtherRetail,
};

// Classes carrying a maturity dimension (business and government exposures).
bool is_business_or_government(AssetClass c);

const char* to_string(AssetClass c);
AssetClass asset_class_from_string(const std::string& s);  // throws ParseError

// One pooled obligor grade, treated as a single credit in the commingled
// portfolio. Currency amounts are millions of dollars.
struct ObligorGrade {
    std::string id;
    AssetClass asset_class = AssetClass::Corporate;
    double ead = 0.0;   // exposure at default, >= 0
    double lgd = 0.0;   // loss given default, in [0,1]
    double pd = 0.0;    // one-year unconditional PD, strictly in (0,1)
    std::optional<double> maturity_years;  // business/government classes only
    std::optional<double> firm_size;       // SME only, annual turnover in millions
    std::optional<double> rho_override;    // wins over the class formula when present
};

// All obligor grades reported as at the end of one quarter.
struct PortfolioSnapshot {
    Quarter as_of;
    std::vector<ObligorGrade> grades;  // input order is preserved
};

// Per-quarter RWA split, provisions and capital base from the capital
// adequacy form. non_irb_expected_loss is the reported one-year expected
// loss on non-IRB banking book exposures; it is the denominator input the
// provision allocation needs and cannot be derived from IRB grades.
struct CapitalAccounts {
    Quarter as_of;
    double rwa_irb = 0.0;     // RWA for IRB credit exposures
    double rwa_credit = 0.0;  // RWA for credit risk
    double rwa_total = 0.0;   // total RWA
    double provisions = 0.0;
    double capital_base = 0.0;
    double non_irb_expected_loss = 0.0;
};

// Charges for bad and doubtful debts recognised during one quarter.
struct LossRecord {
    Quarter quarter;
    double credit_loss = 0.0;
};

// Aligned quarterly series. Loss quarters may extend beyond the last
// snapshot quarter; forward loss windows need them.
struct QuarterSeries {
    std::map<Quarter, PortfolioSnapshot> snapshots;
    std::map<Quarter, CapitalAccounts> accounts;
    std::map<Quarter, LossRecord> losses;
};

}  // namespace asrf
