#pragma once

#include <cmath>
#include <cstdint>

namespace asrf::mc {

// Counter-based generator: SplitMix64 accessed at random offsets. The i-th
// draw of a stream mixes state key + i*gamma, so draws are order-independent
// and scenario-parallel execution reproduces the serial output bit for bit.
inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed + kGamma) ^ mix64(stream + 0x6a09e667f3bcc909ULL));
}

inline std::uint64_t bits_at(std::uint64_t key, std::uint64_t ctr) {
    return mix64(key + kGamma * ctr);
}

// Uniform draw strictly inside (0,1): 52 mantissa bits centred on the cell,
// so neither 0 nor 1 is ever produced. The SIMD kernels replicate this
// construction exactly.
inline double uniform_at(std::uint64_t key, std::uint64_t ctr) {
    return (static_cast<double>(bits_at(key, ctr) >> 12) + 0.5) * 0x1p-52;
}

// Integer threshold T such that uniform_at(...) < p  <=>  (bits >> 12) < T.
// Both kernel lanes compute the comparison on raw bits with this shared
// conversion, which keeps them bit-identical.
inline std::int64_t bernoulli_threshold(double p) {
    double t = p * 4503599627370496.0 - 0.5;  // p * 2^52
    if (t <= 0.0) return 0;
    if (t >= 4503599627370496.0) return 4503599627370496LL;
    return static_cast<std::int64_t>(std::ceil(t));
}

// Stream ids for the Monte Carlo engine.
enum : std::uint64_t {
    kStreamScenario = 0,     // systematic factor draws
    kStreamBernoulli = 1,    // conditional-PD default indicators
    kStreamAssetValue = 2,   // idiosyncratic asset-value draws
};

}  // namespace asrf::mc
