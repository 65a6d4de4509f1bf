#pragma once

#include <cmath>

#include "asrf/errors.hpp"

namespace asrf {

// Probability-like value, checked into [0,1] on construction.
class UnitInterval {
  public:
    constexpr UnitInterval() = default;
    UnitInterval(double v) : v_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("value outside [0,1]: " + std::to_string(v));
    }
    constexpr operator double() const { return v_; }
    constexpr double value() const { return v_; }

  private:
    double v_ = 0.0;
};

}  // namespace asrf
