#include "asrf/types.hpp"

#include <array>

#include "asrf/errors.hpp"

namespace asrf {

namespace {
constexpr std::array<std::pair<AssetClass, const char*>, 7> kClassNames = {{
    {AssetClass::Corporate, "corporate"},
    {AssetClass::Sme, "sme"},
    {AssetClass::Bank, "bank"},
    {AssetClass::Sovereign, "sovereign"},
    {AssetClass::ResidentialMortgage, "residential_mortgage"},
    {AssetClass::QualifiedRevolving, "qualified_revolving"},
    {AssetClass::OtherRetail, "other_retail"},
}};
}

bool is_business_or_government(AssetClass c) {
    switch (c) {
        case AssetClass::Corporate:
        case AssetClass::Sme:
        case AssetClass::Bank:
        case AssetClass::Sovereign:
            return true;
        default:
            return false;
    }
}

const char* to_string(AssetClass c) {
    for (const auto& [cls, name] : kClassNames)
        if (cls == c) return name;
    return "?";
}

AssetClass asset_class_from_string(const std::string& s) {
    for (const auto& [cls, name] : kClassNames)
        if (s == name) return cls;
    throw ParseError("unknown asset class '" + s + "'");
}

}  // namespace asrf
