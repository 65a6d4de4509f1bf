#include "asrf/basel/params.hpp"

#include <algorithm>
#include <cmath>

#include "asrf/errors.hpp"

namespace asrf::basel {

namespace {

constexpr double kMortgageRho = 0.15;
constexpr double kRevolvingRho = 0.04;
constexpr double kCorporateRhoLo = 0.12;   // limit as pd -> 1
constexpr double kCorporateRhoHi = 0.24;   // limit as pd -> 0
constexpr double kOtherRetailRhoLo = 0.03;
constexpr double kOtherRetailRhoHi = 0.16;
constexpr double kCorporateDecay = 50.0;
constexpr double kOtherRetailDecay = 35.0;
constexpr double kSmeSizeLo = 5.0;    // firm size clamp, millions of turnover
constexpr double kSmeSizeHi = 50.0;
constexpr double kSmeAdjustment = 0.04;
constexpr double kMaturityLo = 1.0;
constexpr double kMaturityHi = 5.0;
constexpr double kSlopeA = 0.11852;   // b(pd) = (A - B ln pd)^2
constexpr double kSlopeB = 0.05478;

double pd_weight(double pd, double decay) {
    return (1.0 - std::exp(-decay * pd)) / (1.0 - std::exp(-decay));
}

double corporate_rho(double pd) {
    double w = pd_weight(pd, kCorporateDecay);
    return kCorporateRhoLo * w + kCorporateRhoHi * (1.0 - w);
}

void check_pd(double pd) {
    if (!(pd > 0.0 && pd < 1.0))
        throw ParameterError("pd must lie strictly in (0,1), got " + std::to_string(pd));
}

}  // namespace

double asset_correlation(AssetClass asset_class, double pd,
                         std::optional<double> firm_size) {
    check_pd(pd);
    if (firm_size && asset_class != AssetClass::Sme)
        throw ParameterError("firm_size is only meaningful for SME grades");
    switch (asset_class) {
        case AssetClass::ResidentialMortgage:
            return kMortgageRho;
        case AssetClass::QualifiedRevolving:
            return kRevolvingRho;
        case AssetClass::Corporate:
        case AssetClass::Bank:
        case AssetClass::Sovereign:
            return corporate_rho(pd);
        case AssetClass::OtherRetail: {
            double w = pd_weight(pd, kOtherRetailDecay);
            return kOtherRetailRhoLo * w + kOtherRetailRhoHi * (1.0 - w);
        }
        case AssetClass::Sme: {
            if (!firm_size)
                throw ParameterError("SME grade requires firm_size");
            double s = std::clamp(*firm_size, kSmeSizeLo, kSmeSizeHi);
            return corporate_rho(pd) -
                   kSmeAdjustment * (1.0 - (s - kSmeSizeLo) / (kSmeSizeHi - kSmeSizeLo));
        }
    }
    throw ParameterError("unhandled asset class");
}

double maturity_adjustment(AssetClass asset_class, double pd,
                           std::optional<double> maturity_years) {
    check_pd(pd);
    if (!is_business_or_government(asset_class)) {
        if (maturity_years)
            throw ParameterError("maturity is meaningless for retail classes");
        return 1.0;
    }
    if (!maturity_years)
        throw ParameterError("business/government grade requires maturity_years");
    double m = std::clamp(*maturity_years, kMaturityLo, kMaturityHi);
    double b = kSlopeA - kSlopeB * std::log(pd);
    b *= b;
    return (1.0 + (m - 2.5) * b) / (1.0 - 1.5 * b);
}

SupervisoryParams resolve(const ObligorGrade& grade) {
    double rho;
    if (grade.rho_override) {
        rho = *grade.rho_override;
        if (!(rho > 0.0 && rho < 1.0))
            throw ParameterError("rho_override outside (0,1) for grade " + grade.id);
    } else {
        rho = asset_correlation(grade.asset_class, grade.pd, grade.firm_size);
    }
    double nu = maturity_adjustment(grade.asset_class, grade.pd, grade.maturity_years);
    return {rho, nu};
}

std::vector<ConstantRow> constants_table() {
    return {
        {"residential_mortgage", "rho = const", "rho=0.15"},
        {"qualified_revolving", "rho = const", "rho=0.04"},
        {"corporate|bank|sovereign", "rho = 0.12 w + 0.24 (1-w)",
         "w=(1-exp(-50 pd))/(1-exp(-50))"},
        {"other_retail", "rho = 0.03 w + 0.16 (1-w)", "w=(1-exp(-35 pd))/(1-exp(-35))"},
        {"sme", "rho = corporate - 0.04 (1 - (clamp(S,5,50)-5)/45)", "S in millions"},
        {"corporate|sme|bank|sovereign", "nu = (1 + (M-2.5) b)/(1 - 1.5 b)",
         "b=(0.11852-0.05478 ln pd)^2; M clamped to [1,5]"},
        {"retail classes", "nu = 1", ""},
    };
}

}  // namespace asrf::basel
