#pragma once

#include <cstdint>
#include <vector>

#include "asrf/types.hpp"

namespace asrf::io {

// Synthetic reporting-form generator. The loss path is produced by forward-
// evaluating the conditional-loss display along base_y_path, so the factor
// recovery pipeline can be validated end to end: in deterministic mode the
// allocated four-quarter window losses equal the conditional expected loss at
// the path exactly; in noisy mode they are binomially sampled around it with
// obligors_per_grade clones per grade.
struct SynthSpec {
    int quarters = 12;
    int grades_per_class = 2;
    std::vector<double> pd_band_edges = {0.0005, 0.002, 0.008, 0.03, 0.12};
    std::vector<double> base_y_path;  // empty: a gentle mid-series recession dip
    std::uint64_t seed = 12345;
    double ead_scale = 1000.0;  // total book EAD, millions
    bool noisy = false;
    std::uint64_t obligors_per_grade = 200000;  // noisy-mode granularity
    Quarter start = Quarter(2008, 1);
};

// Default path used when base_y_path is empty.
std::vector<double> default_y_path(int quarters);

QuarterSeries synthesize(const SynthSpec& spec);

}  // namespace asrf::io
