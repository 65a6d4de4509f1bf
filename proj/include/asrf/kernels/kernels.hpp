#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace asrf::kernels {

// One ISA-specific implementation of the arithmetic inner loops. The scalar
// variant is the reference; SIMD variants are equivalence-tested against it.
// All kernels are pure functions.
struct Ops {
    const char* name;

    // out[i] = Phi(x[i]) for finite x
    void (*norm_cdf_batch)(const double* x, double* out, std::size_t n);

    // sum_i w[i] * Phi(a[i] - b[i]*y), compensated accumulation in index order
    double (*conditional_loss)(const double* w, const double* a, const double* b,
                               std::size_t n, double y);

    // Default counts among m clones of one grade; draw j uses counter ctr0+j.
    //   bernoulli:    count of  u_j < p_cond
    //   asset value:  count of  sqrt_rho_y + sqrt_1m_rho * Phi^-1(u_j) < threshold
    std::uint64_t (*count_defaults_bernoulli)(std::uint64_t key, std::uint64_t ctr0,
                                              std::uint64_t m, double p_cond);
    std::uint64_t (*count_defaults_asset_value)(std::uint64_t key, std::uint64_t ctr0,
                                                std::uint64_t m, double sqrt_rho_y,
                                                double sqrt_1m_rho, double threshold);
};

// Always-available scalar reference.
const Ops& scalar();

// Currently selected implementation. Defaults to the best variant the CPU
// supports; override with select() or the ASRF_KERNEL environment variable
// (read once at first use).
const Ops& active();

// name: "auto", "scalar" or a SIMD variant from available().
// Throws ParameterError for unknown or unsupported names.
void select(const std::string& name);

std::vector<std::string> available();

}  // namespace asrf::kernels
