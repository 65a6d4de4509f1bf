#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asrf/types.hpp"

namespace asrf::basel {

// Supervisory inputs resolved for one obligor grade.
struct SupervisoryParams {
    double rho;                  // asset correlation, in (0,1)
    double maturity_adjustment;  // nu, 1 for retail classes
};

// Asset correlation per asset class:
//   residential mortgage 0.15, qualified revolving 0.04 (constants);
//   corporate/bank/sovereign  0.12 w + 0.24 (1-w), w = (1-e^{-50 pd})/(1-e^{-50});
//   other retail              0.03 w + 0.16 (1-w), w = (1-e^{-35 pd})/(1-e^{-35});
//   SME: corporate value - 0.04 (1 - (clamp(S,5,50)-5)/45), S in millions.
// Throws ParameterError when firm_size is missing for SME (or present elsewhere).
double asset_correlation(AssetClass asset_class, double pd,
                         std::optional<double> firm_size = std::nullopt);

// Maturity adjustment (1 + (M - 2.5) b) / (1 - 1.5 b), b = (0.11852 - 0.05478 ln pd)^2,
// with M clamped to [1,5]. Business/government classes only; retail classes
// return exactly 1 and reject an explicit maturity.
double maturity_adjustment(AssetClass asset_class, double pd,
                           std::optional<double> maturity_years = std::nullopt);

// Resolve both parameters for a grade; rho_override wins over the class formula.
SupervisoryParams resolve(const ObligorGrade& grade);

// Constants table for `asrf params --dump`.
struct ConstantRow {
    std::string asset_class;
    std::string formula;
    std::string constants;
};
std::vector<ConstantRow> constants_table();

}  // namespace asrf::basel
