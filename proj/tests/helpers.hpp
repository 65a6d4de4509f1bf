#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "asrf/types.hpp"

namespace testutil {

// Deterministic xorshift-style generator for test fixtures (independent of
// the engine's RNG on purpose).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}
    double uniform() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return static_cast<double>(state_ >> 11) * 0x1p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

// Random heterogeneous book across all asset classes.
inline asrf::PortfolioSnapshot random_book(std::uint64_t seed, std::size_t grades_per_class = 3,
                                           asrf::Quarter as_of = asrf::Quarter(2009, 2)) {
    using namespace asrf;
    Rng rng(seed);
    PortfolioSnapshot snap;
    snap.as_of = as_of;
    const AssetClass classes[] = {
        AssetClass::Corporate,          AssetClass::Sme,
        AssetClass::Bank,               AssetClass::Sovereign,
        AssetClass::ResidentialMortgage, AssetClass::QualifiedRevolving,
        AssetClass::OtherRetail};
    int idx = 0;
    for (auto cls : classes) {
        for (std::size_t j = 0; j < grades_per_class; ++j) {
            ObligorGrade g;
            g.id = std::string(to_string(cls)) + "_" + std::to_string(j);
            g.asset_class = cls;
            g.ead = rng.uniform(10.0, 500.0);
            g.lgd = rng.uniform(0.1, 0.8);
            g.pd = rng.uniform(0.0005, 0.08);
            if (is_business_or_government(cls)) g.maturity_years = rng.uniform(1.0, 5.0);
            if (cls == AssetClass::Sme) g.firm_size = rng.uniform(5.0, 60.0);
            snap.grades.push_back(std::move(g));
            ++idx;
        }
    }
    (void)idx;
    return snap;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic series).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    double n_eff = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                   static_cast<double>(a.size() + b.size());
    double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k)
        sum += 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(sum, 0.0, 1.0);
}

// Composite-Simpson quadrature of f(y) dPhi(y) over [-10, 10].
inline double gaussian_expectation(const std::function<double(double)>& f,
                                   int intervals = 4000) {
    auto integrand = [&](double y) {
        return f(y) * 0.3989422804014327 * std::exp(-0.5 * y * y);
    };
    double lo = -10.0, hi = 10.0;
    double h = (hi - lo) / intervals;
    double sum = integrand(lo) + integrand(hi);
    for (int i = 1; i < intervals; ++i)
        sum += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace testutil
