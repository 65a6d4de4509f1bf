#pragma once

#include "asrf/unit_interval.hpp"

namespace asrf::math {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Standard normal distribution function Phi. Absolute error is far below the
// 1e-12 contract (the erfc expansion is accurate to a few ulp per branch).
// Throws DomainError on non-finite input.
UnitInterval norm_cdf(double x);

// Standard normal density.
double norm_pdf(double x);

// Inverse of Phi on the open interval (0,1): rational seed refined by one
// Newton step on the CDF, so the Phi round trip holds to full precision.
// Throws DomainError for p outside (0,1), including the boundary values.
double norm_quantile(double p);

// Unchecked fast paths for kernels whose inputs are finite by construction.
double norm_cdf_unchecked(double x) noexcept;
double norm_quantile_unchecked(double p) noexcept;

// Full-range complementary error function underlying norm_cdf.
double erfc_scalar(double x) noexcept;

}  // namespace asrf::math
