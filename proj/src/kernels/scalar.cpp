#include <cstddef>
#include <cstdint>

#include "asrf/kernels/kernels.hpp"
#include "asrf/math/normal.hpp"
#include "asrf/mc/rng.hpp"

namespace asrf::kernels {

namespace {

void norm_cdf_batch_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = math::norm_cdf_unchecked(x[i]);
}

double conditional_loss_scalar(const double* w, const double* a, const double* b,
                               std::size_t n, double y) {
    // Kahan accumulation in input order; permutation invariance of the sum
    // must hold to 1e-9 relative on 1e5-grade books.
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double term = w[i] * math::norm_cdf_unchecked(a[i] - b[i] * y);
        double t = term - carry;
        double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
    return sum;
}

std::uint64_t count_defaults_bernoulli_scalar(std::uint64_t key, std::uint64_t ctr0,
                                              std::uint64_t m, double p_cond) {
    const std::int64_t threshold = mc::bernoulli_threshold(p_cond);
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < m; ++j) {
        auto h = static_cast<std::int64_t>(mc::bits_at(key, ctr0 + j) >> 12);
        count += h < threshold;
    }
    return count;
}

std::uint64_t count_defaults_asset_value_scalar(std::uint64_t key, std::uint64_t ctr0,
                                                std::uint64_t m, double sqrt_rho_y,
                                                double sqrt_1m_rho, double threshold) {
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < m; ++j) {
        double eps = math::norm_quantile_unchecked(mc::uniform_at(key, ctr0 + j));
        double asset_value = sqrt_rho_y + sqrt_1m_rho * eps;
        count += asset_value < threshold;
    }
    return count;
}

}  // namespace

const Ops& scalar() {
    static const Ops ops = {
        "scalar",
        &norm_cdf_batch_scalar,
        &conditional_loss_scalar,
        &count_defaults_bernoulli_scalar,
        &count_defaults_asset_value_scalar,
    };
    return ops;
}

}  // namespace asrf::kernels
