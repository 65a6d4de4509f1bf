// AVX2 variants of the arithmetic inner loops. The default-count kernels are
// bit-identical to the scalar reference (integer RNG plus shared thresholds);
// the transcendental kernels agree with it to a few ulp and are
// equivalence-tested in tests/test_kernels.cpp.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "asrf/kernels/kernels.hpp"
#include "asrf/math/normal.hpp"
#include "asrf/mc/rng.hpp"

namespace asrf::kernels {

namespace {

inline __m256i set1_u64(std::uint64_t v) {
    return _mm256_set1_epi64x(static_cast<long long>(v));
}

// 64x64 -> low 64 multiply out of 32-bit pieces (AVX2 has no mullo_epi64).
inline __m256i mullo64(__m256i a, __m256i b) {
    __m256i lo = _mm256_mul_epu32(a, b);
    __m256i m1 = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
    __m256i m2 = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
    __m256i mid = _mm256_add_epi64(m1, m2);
    return _mm256_add_epi64(lo, _mm256_slli_epi64(mid, 32));
}

inline __m256i mix64_v(__m256i z) {
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)),
                set1_u64(0xbf58476d1ce4e5b9ULL));
    z = mullo64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)),
                set1_u64(0x94d049bb133111ebULL));
    return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

inline __m256i bits_at_v(__m256i key, __m256i ctr) {
    return mix64_v(_mm256_add_epi64(key, mullo64(set1_u64(mc::kGamma), ctr)));
}

// Exact u64 -> double for values below 2^52.
inline __m256d u52_to_pd(__m256i h) {
    const __m256d magic = _mm256_set1_pd(0x1p52);
    __m256d d = _mm256_castsi256_pd(
        _mm256_or_si256(h, _mm256_castpd_si256(magic)));
    return _mm256_sub_pd(d, magic);
}

// ---------------------------------------------------------------------------
// Vector exp/log on the domains the kernels use (finite, normal-range args).

inline __m256d pow2_int(__m256d n) {  // 2^n for integral-valued n in [-1022, 1023]
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, set1_u64(1023)), 52);
    return _mm256_castsi256_pd(bits);
}

inline __m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    // clamp keeps the scaling in normal range; callers mask the result anyway
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
    x = _mm256_min_pd(x, _mm256_set1_pd(708.0));

    __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, c1));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, c2));
    __m256d rr = _mm256_mul_pd(r, r);

    // exp(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2))   (Cephes rational)
    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_add_pd(_mm256_mul_pd(p, rr), _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_add_pd(_mm256_mul_pd(p, rr), _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, r);
    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(2.00000000000000000005e0));
    __m256d e = _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), p),
                              _mm256_sub_pd(q, p));
    e = _mm256_add_pd(e, _mm256_set1_pd(1.0));

    // two-step scale so intermediate exponents stay in range
    __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
    __m256d n2 = _mm256_sub_pd(n, n1);
    return _mm256_mul_pd(_mm256_mul_pd(e, pow2_int(n1)), pow2_int(n2));
}

inline __m256d log_pd(__m256d x) {  // x strictly positive, normal range
    const __m256i mant_mask = set1_u64(0x000fffffffffffffULL);
    const __m256i half_bits = set1_u64(0x3fe0000000000000ULL);

    __m256i bits = _mm256_castpd_si256(x);
    __m256i exp_raw = _mm256_srli_epi64(_mm256_and_si256(bits, set1_u64(0x7ff0000000000000ULL)), 52);
    __m256d e = _mm256_sub_pd(u52_to_pd(exp_raw), _mm256_set1_pd(1022.0));

    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));
    // fold m into [sqrt(1/2), sqrt(2))
    __m256d below = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
    m = _mm256_add_pd(m, _mm256_and_pd(below, m));          // m *= 2 where below
    e = _mm256_sub_pd(e, _mm256_and_pd(below, _mm256_set1_pd(1.0)));

    __m256d one = _mm256_set1_pd(1.0);
    __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    __m256d z = _mm256_mul_pd(s, s);
    // 2 atanh(s) = 2s (1 + z/3 + z^2/5 + ...)
    __m256d w = _mm256_set1_pd(1.0 / 19.0);
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 17.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 15.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 13.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 11.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 9.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 7.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 5.0));
    w = _mm256_add_pd(_mm256_mul_pd(w, z), _mm256_set1_pd(1.0 / 3.0));
    __m256d log_m = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s),
                                  _mm256_add_pd(one, _mm256_mul_pd(z, w)));

    const __m256d ln2_hi = _mm256_set1_pd(0.693359375);
    const __m256d ln2_lo = _mm256_set1_pd(-2.121944400546905827679e-4);
    __m256d r = _mm256_add_pd(log_m, _mm256_mul_pd(e, ln2_lo));
    return _mm256_add_pd(r, _mm256_mul_pd(e, ln2_hi));
}

// ---------------------------------------------------------------------------
// erfc / Phi (Cody branches blended by masks)

inline __m256d exp_neg_sq(__m256d y) {
    __m256d ysq = _mm256_round_pd(_mm256_mul_pd(y, _mm256_set1_pd(16.0)),
                                  _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    ysq = _mm256_mul_pd(ysq, _mm256_set1_pd(1.0 / 16.0));
    __m256d del = _mm256_mul_pd(_mm256_sub_pd(y, ysq), _mm256_add_pd(y, ysq));
    __m256d a = exp_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), ysq), ysq));
    return _mm256_mul_pd(a, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), del)));
}

inline __m256d erfc_pd(__m256d x) {
    const __m256d zero = _mm256_setzero_pd();
    __m256d y = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);  // |x|

    // region 1: |x| <= 0.46875, erf rational in x^2
    __m256d z1 = _mm256_mul_pd(x, x);
    __m256d num = _mm256_mul_pd(_mm256_set1_pd(1.85777706184603153e-1), z1);
    __m256d den = z1;
    num = _mm256_mul_pd(_mm256_add_pd(num, _mm256_set1_pd(3.16112374387056560e0)), z1);
    den = _mm256_mul_pd(_mm256_add_pd(den, _mm256_set1_pd(2.36012909523441209e1)), z1);
    num = _mm256_mul_pd(_mm256_add_pd(num, _mm256_set1_pd(1.13864154151050156e2)), z1);
    den = _mm256_mul_pd(_mm256_add_pd(den, _mm256_set1_pd(2.44024637934444173e2)), z1);
    num = _mm256_mul_pd(_mm256_add_pd(num, _mm256_set1_pd(3.77485237685302021e2)), z1);
    den = _mm256_mul_pd(_mm256_add_pd(den, _mm256_set1_pd(1.28261652607737228e3)), z1);
    __m256d erf1 = _mm256_mul_pd(
        x, _mm256_div_pd(_mm256_add_pd(num, _mm256_set1_pd(3.20937758913846947e3)),
                         _mm256_add_pd(den, _mm256_set1_pd(2.84423683343917062e3))));
    __m256d r1 = _mm256_sub_pd(_mm256_set1_pd(1.0), erf1);

    __m256d in_r1 = _mm256_cmp_pd(y, _mm256_set1_pd(0.46875), _CMP_LE_OQ);
    if (_mm256_movemask_pd(in_r1) == 0xF) return r1;

    // region 2: 0.46875 < y <= 4
    __m256d n2 = _mm256_mul_pd(_mm256_set1_pd(2.15311535474403846e-8), y);
    __m256d d2 = y;
    const double c2v[7] = {5.64188496988670089e-1, 8.88314979438837594e0,
                           6.61191906371416295e1,  2.98635138197400131e2,
                           8.81952221241769090e2,  1.71204761263407058e3,
                           2.05107837782607147e3};
    const double d2v[7] = {1.57449261107098347e1, 1.17693950891312499e2,
                           5.37181101862009858e2, 1.62138957456669019e3,
                           3.29079923573345963e3, 4.36261909014324716e3,
                           3.43936767414372164e3};
    for (int i = 0; i < 7; ++i) {
        n2 = _mm256_mul_pd(_mm256_add_pd(n2, _mm256_set1_pd(c2v[i])), y);
        d2 = _mm256_mul_pd(_mm256_add_pd(d2, _mm256_set1_pd(d2v[i])), y);
    }
    __m256d r2 = _mm256_div_pd(_mm256_add_pd(n2, _mm256_set1_pd(1.23033935479799725e3)),
                               _mm256_add_pd(d2, _mm256_set1_pd(1.23033935480374942e3)));

    // region 3: y > 4
    __m256d z3 = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_mul_pd(y, y));
    __m256d n3 = _mm256_mul_pd(_mm256_set1_pd(1.63153871373020978e-2), z3);
    __m256d d3 = z3;
    const double p3v[4] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                           1.25781726111229246e-1, 1.60837851487422766e-2};
    const double q3v[4] = {2.56852019228982242e0, 1.87295284992346047e0,
                           5.27905102951428412e-1, 6.05183413124413191e-2};
    for (int i = 0; i < 4; ++i) {
        n3 = _mm256_mul_pd(_mm256_add_pd(n3, _mm256_set1_pd(p3v[i])), z3);
        d3 = _mm256_mul_pd(_mm256_add_pd(d3, _mm256_set1_pd(q3v[i])), z3);
    }
    __m256d rat3 = _mm256_mul_pd(
        z3, _mm256_div_pd(_mm256_add_pd(n3, _mm256_set1_pd(6.58749161529837803e-4)),
                          _mm256_add_pd(d3, _mm256_set1_pd(2.33520497626869185e-3))));
    __m256d r3 = _mm256_div_pd(
        _mm256_sub_pd(_mm256_set1_pd(5.6418958354775628695e-1), rat3), y);

    __m256d in_r2 = _mm256_cmp_pd(y, _mm256_set1_pd(4.0), _CMP_LE_OQ);
    __m256d pos = _mm256_blendv_pd(r3, r2, in_r2);
    pos = _mm256_mul_pd(pos, exp_neg_sq(y));
    // erfc underflows beyond 26.543
    pos = _mm256_and_pd(pos, _mm256_cmp_pd(y, _mm256_set1_pd(26.543), _CMP_LT_OQ));

    __m256d neg = _mm256_sub_pd(_mm256_set1_pd(2.0), pos);
    __m256d res = _mm256_blendv_pd(pos, neg, _mm256_cmp_pd(x, zero, _CMP_LT_OQ));
    return _mm256_blendv_pd(res, r1, in_r1);
}

inline __m256d norm_cdf_pd(__m256d x) {
    const __m256d minus_inv_sqrt2 = _mm256_set1_pd(-asrf::math::kInvSqrt2);
    return _mm256_mul_pd(_mm256_set1_pd(0.5),
                         erfc_pd(_mm256_mul_pd(x, minus_inv_sqrt2)));
}

// ---------------------------------------------------------------------------
// Normal quantile (AS 241 without the scalar path's Newton polish; the MC
// asset-value comparison needs ~1e-15 relative accuracy, which this has)

inline __m256d ppnd_rational(const double (&num)[8], const double (&den)[7], __m256d r) {
    __m256d p = _mm256_set1_pd(num[7]);
    for (int i = 6; i >= 0; --i)
        p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(num[i]));
    __m256d q = _mm256_set1_pd(den[6]);
    for (int i = 5; i >= 0; --i)
        q = _mm256_add_pd(_mm256_mul_pd(q, r), _mm256_set1_pd(den[i]));
    q = _mm256_add_pd(_mm256_mul_pd(q, r), _mm256_set1_pd(1.0));
    return _mm256_div_pd(p, q);
}

constexpr double kPpndA[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                              1.9715909503065514427e3,  1.3731693765509461125e4,
                              4.5921953931549871457e4,  6.7265770927008700853e4,
                              3.3430575583588128105e4,  2.5090809287301226727e3};
constexpr double kPpndB[7] = {4.2313330701600911252e1, 6.8718700749205790830e2,
                              5.3941960214247511077e3, 2.1213794301586595867e4,
                              3.9307895800092710610e4, 2.8729085735721942674e4,
                              5.2264952788528545610e3};
constexpr double kPpndC[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                              5.76949722146069140550e0,  3.64784832476320460504e0,
                              1.27045825245236838258e0,  2.41780725177450611770e-1,
                              2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kPpndD[7] = {2.05319162663775882187e0,  1.67638483018380384940e0,
                              6.89767334985100004550e-1, 1.48103976427480074590e-1,
                              1.51986665636164571966e-2, 5.47593808499534494600e-4,
                              1.05075007164441684324e-9};
constexpr double kPpndE[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                              1.78482653991729133580e0,  2.96560571828504891230e-1,
                              2.65321895265761230930e-2, 1.24266094738807843860e-3,
                              2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kPpndF[7] = {5.99832206555887937690e-1, 1.36929880922735805310e-1,
                              1.48753612908506148525e-2, 7.86869131145613259100e-4,
                              1.84631831751005468180e-5, 1.42151175831644588870e-7,
                              2.04426310338993978564e-15};

inline __m256d ppnd_pd(__m256d u) {
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d q = _mm256_sub_pd(u, half);
    __m256d aq = _mm256_andnot_pd(_mm256_set1_pd(-0.0), q);
    __m256d central = _mm256_cmp_pd(aq, _mm256_set1_pd(0.425), _CMP_LE_OQ);

    __m256d rc = _mm256_sub_pd(_mm256_set1_pd(0.180625), _mm256_mul_pd(q, q));
    __m256d xc = _mm256_mul_pd(q, ppnd_rational(kPpndA, kPpndB, rc));
    if (_mm256_movemask_pd(central) == 0xF) return xc;

    __m256d umin = _mm256_min_pd(u, _mm256_sub_pd(_mm256_set1_pd(1.0), u));
    __m256d r = _mm256_sqrt_pd(_mm256_sub_pd(_mm256_setzero_pd(), log_pd(umin)));
    __m256d mid = _mm256_cmp_pd(r, _mm256_set1_pd(5.0), _CMP_LE_OQ);
    __m256d xm = ppnd_rational(kPpndC, kPpndD, _mm256_sub_pd(r, _mm256_set1_pd(1.6)));
    __m256d xt = xm;
    if (_mm256_movemask_pd(mid) != 0xF) {  // r > 5 needs tail mass below 1.4e-11
        __m256d xf = ppnd_rational(kPpndE, kPpndF, _mm256_sub_pd(r, _mm256_set1_pd(5.0)));
        xt = _mm256_blendv_pd(xf, xm, mid);
    }
    // restore the sign of the tail
    __m256d neg = _mm256_cmp_pd(q, _mm256_setzero_pd(), _CMP_LT_OQ);
    xt = _mm256_blendv_pd(xt, _mm256_sub_pd(_mm256_setzero_pd(), xt), neg);
    return _mm256_blendv_pd(xt, xc, central);
}

// ---------------------------------------------------------------------------
// Kernel entry points

void norm_cdf_batch_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, norm_cdf_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = math::norm_cdf_unchecked(x[i]);
}

double conditional_loss_avx2(const double* w, const double* a, const double* b,
                             std::size_t n, double y) {
    __m256d yv = _mm256_set1_pd(y);
    __m256d sum = _mm256_setzero_pd();
    __m256d carry = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d arg = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                    _mm256_mul_pd(_mm256_loadu_pd(b + i), yv));
        __m256d term = _mm256_mul_pd(_mm256_loadu_pd(w + i), norm_cdf_pd(arg));
        // Kahan update per lane
        __m256d t = _mm256_sub_pd(term, carry);
        __m256d s = _mm256_add_pd(sum, t);
        carry = _mm256_sub_pd(_mm256_sub_pd(s, sum), t);
        sum = s;
    }
    alignas(32) double sums[4], carries[4];
    _mm256_store_pd(sums, sum);
    _mm256_store_pd(carries, carry);
    double total = 0.0, tc = 0.0;
    for (int lane = 0; lane < 4; ++lane) {
        double t = (sums[lane] - carries[lane]) - tc;
        double s = total + t;
        tc = (s - total) - t;
        total = s;
    }
    for (; i < n; ++i) {
        double term = w[i] * math::norm_cdf_unchecked(a[i] - b[i] * y);
        double t = term - tc;
        double s = total + t;
        tc = (s - total) - t;
        total = s;
    }
    return total;
}

std::uint64_t count_defaults_bernoulli_avx2(std::uint64_t key, std::uint64_t ctr0,
                                            std::uint64_t m, double p_cond) {
    const std::int64_t threshold = mc::bernoulli_threshold(p_cond);
    const __m256i tv = _mm256_set1_epi64x(threshold);
    const __m256i keyv = set1_u64(key);
    std::uint64_t count = 0;
    std::uint64_t j = 0;
    for (; j + 4 <= m; j += 4) {
        __m256i ctr = _mm256_add_epi64(
            set1_u64(ctr0 + j), _mm256_set_epi64x(3, 2, 1, 0));
        __m256i h = _mm256_srli_epi64(bits_at_v(keyv, ctr), 12);
        __m256i lt = _mm256_cmpgt_epi64(tv, h);
        count += static_cast<unsigned>(
            __builtin_popcount(_mm256_movemask_pd(_mm256_castsi256_pd(lt))));
    }
    for (; j < m; ++j) {
        auto h = static_cast<std::int64_t>(mc::bits_at(key, ctr0 + j) >> 12);
        count += h < threshold;
    }
    return count;
}

std::uint64_t count_defaults_asset_value_avx2(std::uint64_t key, std::uint64_t ctr0,
                                              std::uint64_t m, double sqrt_rho_y,
                                              double sqrt_1m_rho, double threshold) {
    const __m256i keyv = set1_u64(key);
    const __m256d sy = _mm256_set1_pd(sqrt_rho_y);
    const __m256d sr = _mm256_set1_pd(sqrt_1m_rho);
    const __m256d thr = _mm256_set1_pd(threshold);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d scale = _mm256_set1_pd(0x1p-52);
    std::uint64_t count = 0;
    std::uint64_t j = 0;
    auto block = [&](std::uint64_t base) {
        __m256i ctr = _mm256_add_epi64(
            set1_u64(ctr0 + base), _mm256_set_epi64x(3, 2, 1, 0));
        __m256i h = _mm256_srli_epi64(bits_at_v(keyv, ctr), 12);
        __m256d u = _mm256_mul_pd(_mm256_add_pd(u52_to_pd(h), half), scale);
        __m256d eps = ppnd_pd(u);
        __m256d av = _mm256_add_pd(sy, _mm256_mul_pd(sr, eps));
        __m256d lt = _mm256_cmp_pd(av, thr, _CMP_LT_OQ);
        return static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(lt)));
    };
    // two independent blocks per iteration overlap the polynomial latency
    for (; j + 8 <= m; j += 8) count += block(j) + block(j + 4);
    for (; j + 4 <= m; j += 4) count += block(j);
    for (; j < m; ++j) {
        double eps = math::norm_quantile_unchecked(mc::uniform_at(key, ctr0 + j));
        count += sqrt_rho_y + sqrt_1m_rho * eps < threshold;
    }
    return count;
}

}  // namespace

const Ops& avx2() {
    static const Ops ops = {
        "avx2",
        &norm_cdf_batch_avx2,
        &conditional_loss_avx2,
        &count_defaults_bernoulli_avx2,
        &count_defaults_asset_value_avx2,
    };
    return ops;
}

}  // namespace asrf::kernels
