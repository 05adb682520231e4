// AVX2 kernel variants. Same math as the scalar reference via the shared
// lane templates; integer Philox uses a packed 2-blocks-per-register layout
// so round outputs land in output order without a shuffle tail.

#if defined(__x86_64__)

#include <immintrin.h>

#include "ilab/kernels.hpp"
#include "lane_math.hpp"

namespace ilab::kern::detail {
namespace {

struct Vec4d;
struct Vec4u {
  __m256i v;
  Vec4u() = default;
  Vec4u(__m256i x) : v(x) {}
  explicit Vec4u(std::uint64_t c) : v(_mm256_set1_epi64x((long long)c)) {}
};
struct VecMask {
  __m256d m;
};
struct Vec4d {
  __m256d v;
  Vec4d() = default;
  Vec4d(__m256d x) : v(x) {}
  Vec4d(double c) : v(_mm256_set1_pd(c)) {}
};

inline Vec4d operator+(Vec4d a, Vec4d b) { return _mm256_add_pd(a.v, b.v); }
inline Vec4d operator-(Vec4d a, Vec4d b) { return _mm256_sub_pd(a.v, b.v); }
inline Vec4d operator*(Vec4d a, Vec4d b) { return _mm256_mul_pd(a.v, b.v); }
inline Vec4d operator/(Vec4d a, Vec4d b) { return _mm256_div_pd(a.v, b.v); }
inline VecMask operator<(Vec4d a, Vec4d b) {
  return {_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)};
}
inline VecMask operator<=(Vec4d a, Vec4d b) {
  return {_mm256_cmp_pd(a.v, b.v, _CMP_LE_OQ)};
}
inline VecMask operator>(Vec4d a, Vec4d b) {
  return {_mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ)};
}
inline VecMask mask_and(VecMask a, VecMask b) {
  return {_mm256_and_pd(a.m, b.m)};
}
inline Vec4d select(VecMask m, Vec4d a, Vec4d b) {
  return _mm256_blendv_pd(b.v, a.v, m.m);
}
inline Vec4d vsqrt(Vec4d x) { return _mm256_sqrt_pd(x.v); }
inline Vec4d vabs(Vec4d x) {
  return _mm256_and_pd(x.v, _mm256_castsi256_pd(_mm256_set1_epi64x(
                                0x7FFFFFFFFFFFFFFFll)));
}
inline Vec4u to_bits(Vec4d x) { return _mm256_castpd_si256(x.v); }
inline Vec4d from_bits(Vec4u b) { return _mm256_castsi256_pd(b.v); }
inline Vec4u shr52(Vec4u b) { return _mm256_srli_epi64(b.v, 52); }
inline Vec4u and_bits(Vec4u a, Vec4u b) { return _mm256_and_si256(a.v, b.v); }
inline Vec4u or_bits(Vec4u a, Vec4u b) { return _mm256_or_si256(a.v, b.v); }
inline Vec4u sub_i64(Vec4u a, Vec4u b) { return _mm256_sub_epi64(a.v, b.v); }
inline Vec4d small_i64_to_f(Vec4u b) {
  const __m256i idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  const __m256i packed = _mm256_permutevar8x32_epi32(b.v, idx);
  return _mm256_cvtepi32_pd(_mm256_castsi256_si128(packed));
}

}  // namespace

template <>
struct lane_bits<Vec4d> {
  using type = Vec4u;
};

namespace {

// --------------------------------------------------------------------------
// Philox4x32-10, two blocks per __m256i: [c0 c1 c2 c3 | c0' c1' c2' c3'].

inline __m256i philox2_blocks(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t blk) {
  const __m256i M = _mm256_setr_epi32((int)kPhiloxM0, 0, (int)kPhiloxM1, 0,
                                      (int)kPhiloxM0, 0, (int)kPhiloxM1, 0);
  const __m256i W = _mm256_setr_epi32((int)kPhiloxW0, 0, (int)kPhiloxW1, 0,
                                      (int)kPhiloxW0, 0, (int)kPhiloxW1, 0);
  const __m256i zmask = _mm256_setr_epi32(-1, 0, -1, 0, -1, 0, -1, 0);
  const int k0 = (int)(std::uint32_t)seed;
  const int k1 = (int)(std::uint32_t)(seed >> 32);
  __m256i K = _mm256_setr_epi32(k0, 0, k1, 0, k0, 0, k1, 0);
  __m256i C = _mm256_set_epi64x((long long)stream, (long long)(blk + 1),
                                (long long)stream, (long long)blk);
  for (int round = 0; round < 10; ++round) {
    const __m256i prod = _mm256_mul_epu32(C, M);
    const __m256i swapped = _mm256_shuffle_epi32(prod, _MM_SHUFFLE(0, 1, 2, 3));
    const __m256i cx = _mm256_and_si256(
        _mm256_shuffle_epi32(C, _MM_SHUFFLE(3, 3, 1, 1)), zmask);
    C = _mm256_xor_si256(swapped, _mm256_xor_si256(cx, K));
    K = _mm256_add_epi32(K, W);
  }
  return C;  // u64 lanes: v0(blk), v1(blk), v0(blk+1), v1(blk+1)
}

inline __m256d u01_from_words(__m256i words) {
  const __m256i k = _mm256_srli_epi64(words, 12);
  const __m256i magic = _mm256_set1_epi64x((long long)kU01Magic);
  const __m256d d = _mm256_castsi256_pd(_mm256_or_si256(k, magic));
  return _mm256_mul_pd(_mm256_sub_pd(d, _mm256_set1_pd(kU01Shift)),
                       _mm256_set1_pd(kU01Scale));
}

void fill_u01_avx2(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t offset, double* out, std::size_t n) {
  std::size_t i = 0;
  std::uint64_t g = offset;
  if (n != 0 && (g & 1) != 0) {  // odd start: emit lane 1 of its block
    std::uint64_t v0, v1;
    philox_block_u64(seed, stream, g >> 1, v0, v1);
    out[i++] = u01_from_u64(v1);
    ++g;
  }
  while (n - i >= 8) {
    const std::uint64_t blk = g >> 1;
    const __m256i c0 = philox2_blocks(seed, stream, blk);
    const __m256i c1 = philox2_blocks(seed, stream, blk + 2);
    _mm256_storeu_pd(out + i, u01_from_words(c0));
    _mm256_storeu_pd(out + i + 4, u01_from_words(c1));
    i += 8;
    g += 8;
  }
  while (n - i >= 4) {
    _mm256_storeu_pd(out + i, u01_from_words(philox2_blocks(seed, stream, g >> 1)));
    i += 4;
    g += 4;
  }
  while (i < n) {
    std::uint64_t v0, v1;
    philox_block_u64(seed, stream, g >> 1, v0, v1);
    out[i++] = u01_from_u64(v0);
    ++g;
    if (i < n) {
      out[i++] = u01_from_u64(v1);
      ++g;
    }
  }
}

void norminv_avx2(const double* p, double* z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Vec4d r = norminv_core(Vec4d(_mm256_loadu_pd(p + i)));
    _mm256_storeu_pd(z + i, r.v);
  }
  for (; i < n; ++i) z[i] = norminv_core(p[i]);
}

void fill_gauss_avx2(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t offset, double* out, std::size_t n) {
  fill_u01_avx2(seed, stream, offset, out, n);
  norminv_avx2(out, out, n);
}

void log_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Vec4d r = vlog_core(Vec4d(_mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(out + i, r.v);
  }
  for (; i < n; ++i) out[i] = vlog_core(x[i]);
}

void bridge_transform_avx2(const double* w, std::size_t n_points, double c,
                           double inv_n, double* out) {
  const Vec4d cv(c), invv(inv_n);
  __m256d kv = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t k = 0;
  for (; k + 4 <= n_points; k += 4) {
    const Vec4d r = bridge_point(Vec4d(_mm256_loadu_pd(w + k)), cv, Vec4d(kv), invv);
    _mm256_storeu_pd(out + k, r.v);
    kv = _mm256_add_pd(kv, four);
  }
  for (; k < n_points; ++k)
    out[k] = bridge_point(w[k], c, double(k), inv_n);
}

void adapted_wealth_terms_avx2(const double* bridge,
                               const double* inv_sigma_ttm,
                               std::size_t n_steps, const AdaptedStepParams& p,
                               double* out) {
  const Vec4d merton(p.merton), b(p.b), r_dt(p.r_dt), dmu(p.mu_minus_r_dt),
      q(p.neg_half_sigma2_dt), sig(p.sigma), zero(0.0), one(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n_steps; k += 4) {
    const Vec4d r = adapted_term(
        Vec4d(_mm256_loadu_pd(bridge + k)), Vec4d(_mm256_loadu_pd(bridge + k + 1)),
        Vec4d(_mm256_loadu_pd(inv_sigma_ttm + k)), merton, b, r_dt, dmu, q, sig,
        p.clamp, zero, one);
    _mm256_storeu_pd(out + k, r.v);
  }
  for (; k < n_steps; ++k)
    out[k] = adapted_term(bridge[k], bridge[k + 1], inv_sigma_ttm[k], p.merton,
                          p.b, p.r_dt, p.mu_minus_r_dt, p.neg_half_sigma2_dt,
                          p.sigma, p.clamp, 0.0, 1.0);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t = {fill_u01_avx2,
                                fill_gauss_avx2,
                                norminv_avx2,
                                log_avx2,
                                bridge_transform_avx2,
                                adapted_wealth_terms_avx2};
  return t;
}

}  // namespace ilab::kern::detail

#endif  // __x86_64__
