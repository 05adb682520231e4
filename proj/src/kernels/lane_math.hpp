#pragma once

// Shared kernel math, written once as templates over a lane type and
// instantiated for plain double (scalar reference) and Vec4d (AVX2). The
// lane contract below is what keeps the two variants bit-identical: every
// operation maps to the same IEEE-754 primitive in both instantiations.
//
// Lane contract for a value type V with bit type I and mask type M:
//   V(double)                broadcast
//   V operator+-*/ V
//   M operator< <= > >= (V,V)
//   M mask_and(M,M)
//   V select(M, a, b)        lanewise m ? a : b
//   V vsqrt(V)               IEEE-754 correctly rounded sqrt
//   V vabs(V)                clears the sign bit
//   I to_bits(V) / V from_bits(I)
//   I shr52(I), I and_bits(I,I), I or_bits(I,I), I sub_i64(I,I)
//   V small_i64_to_f(I)      exact for |x| < 2^31
//   I bits_const(uint64_t)

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace ilab::kern::detail {

// ---------------------------------------------------------------------------
// Philox4x32-10 (counter-based RNG), scalar block function.

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_block(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                         std::uint32_t c3, std::uint32_t k0, std::uint32_t k1,
                         std::uint32_t out[4]) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * c0;
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * c2;
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32);
    const std::uint32_t lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32);
    const std::uint32_t lo1 = std::uint32_t(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    const std::uint32_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  out[0] = c0;
  out[1] = c1;
  out[2] = c2;
  out[3] = c3;
}

// One block yields two 64-bit words: (x1:x0) and (x3:x2).
inline void philox_block_u64(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t blk, std::uint64_t& v0,
                             std::uint64_t& v1) {
  std::uint32_t out[4];
  philox_block(std::uint32_t(blk), std::uint32_t(blk >> 32),
               std::uint32_t(stream), std::uint32_t(stream >> 32),
               std::uint32_t(seed), std::uint32_t(seed >> 32), out);
  v0 = (std::uint64_t(out[1]) << 32) | out[0];
  v1 = (std::uint64_t(out[3]) << 32) | out[2];
}

// ---------------------------------------------------------------------------
// 64-bit word -> uniform double, strictly inside (0,1).
// u = (k + 0.5) * 2^-52 with k = v >> 12; every step is exact in IEEE-754,
// so any implementation route gives the same bits.

inline constexpr std::uint64_t kU01Magic = 0x4330000000000000ull;  // 2^52
inline constexpr double kU01Shift = 4503599627370495.5;            // 2^52-0.5
inline constexpr double kU01Scale = 0x1p-52;

inline double u01_from_u64(std::uint64_t v) {
  const std::uint64_t k = v >> 12;
  return (std::bit_cast<double>(k | kU01Magic) - kU01Shift) * kU01Scale;
}

// ---------------------------------------------------------------------------
// Scalar lane: V = double, I = uint64_t, M = bool.

inline bool mask_and(bool a, bool b) { return a && b; }
inline double select(bool m, double a, double b) { return m ? a : b; }
inline double vsqrt(double x) { return std::sqrt(x); }
inline double vabs(double x) {
  return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) &
                               0x7FFFFFFFFFFFFFFFull);
}
inline std::uint64_t to_bits(double x) { return std::bit_cast<std::uint64_t>(x); }
inline double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }
inline std::uint64_t shr52(std::uint64_t b) { return b >> 52; }
inline std::uint64_t and_bits(std::uint64_t a, std::uint64_t b) { return a & b; }
inline std::uint64_t or_bits(std::uint64_t a, std::uint64_t b) { return a | b; }
inline std::uint64_t sub_i64(std::uint64_t a, std::uint64_t b) { return a - b; }
inline double small_i64_to_f(std::uint64_t b) {
  return double(std::int64_t(b));
}

template <class V>
struct lane_bits;
template <>
struct lane_bits<double> {
  using type = std::uint64_t;
};

// ---------------------------------------------------------------------------
// Natural log, |error| of a few ulp. x must be a positive normal double;
// other inputs give unspecified finite/NaN values that callers mask away.

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309514547;  // nearest double

template <class V>
inline V vlog_core(V x) {
  using I = typename lane_bits<V>::type;
  const I bx = to_bits(x);
  const I ebits = shr52(bx);
  const I mant = or_bits(and_bits(bx, I(0x000FFFFFFFFFFFFFull)),
                         I(0x3FF0000000000000ull));
  V m = from_bits(mant);  // in [1,2)
  V e = small_i64_to_f(sub_i64(ebits, I(1023)));
  const auto fold = m > V(kSqrt2);  // keep m in [sqrt2/2, sqrt2)
  m = select(fold, m * V(0.5), m);
  e = select(fold, e + V(1.0), e);

  const V z = (m - V(1.0)) / (m + V(1.0));
  const V w = z * z;
  // atanh series: log(m) = 2z * (1 + w/3 + w^2/5 + ... ), |z| <= 0.1716
  V r = V(1.0 / 19.0);
  r = r * w + V(1.0 / 17.0);
  r = r * w + V(1.0 / 15.0);
  r = r * w + V(1.0 / 13.0);
  r = r * w + V(1.0 / 11.0);
  r = r * w + V(1.0 / 9.0);
  r = r * w + V(1.0 / 7.0);
  r = r * w + V(1.0 / 5.0);
  r = r * w + V(1.0 / 3.0);
  const V s = z + z;  // 2z
  return e * V(kLn2Hi) + (s + (s * (w * r) + e * V(kLn2Lo)));
}

// ---------------------------------------------------------------------------
// Inverse standard-normal CDF, AS 241 (PPND16). Both branches are always
// evaluated and blended so the scalar reference matches the SIMD variant
// lane for lane.

template <class V, std::size_t N>
inline V horner(V x, const double (&coef)[N]) {
  V acc = V(coef[0]);
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + V(coef[i]);
  return acc;
}

inline constexpr double kNormA[8] = {
    2.5090809287301226727e+3, 3.3430575583588128105e+4,
    6.7265770927008700853e+4, 4.5921953931549871457e+4,
    1.3731693765509461125e+4, 1.9715909503065514427e+3,
    1.3314166789178437745e+2, 3.3871328727963666080e+0};
inline constexpr double kNormB[8] = {
    5.2264952788528545610e+3, 2.8729085735721942674e+4,
    3.9307895800092710610e+4, 2.1213794301586595867e+4,
    5.3941960214247511077e+3, 6.8718700749205790830e+2,
    4.2313330701600911252e+1, 1.0};
inline constexpr double kNormC[8] = {
    7.74545014278341407640e-4, 2.27238449892691845833e-2,
    2.41780725177450611770e-1, 1.27045825245236838258e+0,
    3.64784832476320460504e+0, 5.76949722146069140550e+0,
    4.63033784615654529590e+0, 1.42343711074968357734e+0};
inline constexpr double kNormD[8] = {
    1.05075007164441684324e-9, 5.47593808499534494600e-4,
    1.51986665636164571966e-2, 1.48103976427480074590e-1,
    6.89767334985100004550e-1, 1.67638483018380384940e+0,
    2.05319162663775882187e+0, 1.0};
inline constexpr double kNormE[8] = {
    2.01033439929228813265e-7, 2.71155556874348757815e-5,
    1.24266094738807843860e-3, 2.65321895265761230930e-2,
    2.96560571828504891230e-1, 1.78482653991729133580e+0,
    5.46378491116411436990e+0, 6.65790464350110377720e+0};
inline constexpr double kNormF[8] = {
    2.04426310338993978564e-15, 1.42151175831644588870e-7,
    1.84631831751005468180e-5,  7.86869131145613259100e-4,
    1.48753612908506148525e-2,  1.36929880922735805310e-1,
    5.99832206555887937690e-1,  1.0};

template <class V>
inline V norminv_core(V p) {
  const V zero(0.0), one(1.0), half(0.5);
  const V q = p - half;

  // central branch, |q| <= 0.425
  const V rc = V(0.180625) - q * q;
  const V zc = q * (horner(rc, kNormA) / horner(rc, kNormB));

  // tail branches
  const V pt = select(q < zero, p, one - p);
  const V s = vsqrt(zero - vlog_core(pt));
  const V zi = horner(s - V(1.6), kNormC) / horner(s - V(1.6), kNormD);
  const V zf = horner(s - V(5.0), kNormE) / horner(s - V(5.0), kNormF);
  V zt = select(s <= V(5.0), zi, zf);
  zt = select(q < zero, zero - zt, zt);

  V z = select(vabs(q) <= V(0.425), zc, zt);
  const auto in_domain = mask_and(p > zero, p < one);
  return select(in_domain, z, V(0.0) / V(0.0));
}

// ---------------------------------------------------------------------------
// Elementwise kernels shared by both ISAs via the same template.

template <class V>
inline V bridge_point(V w, V c, V k, V inv_n) {
  return w - c * (k * inv_n);
}

template <class V>
inline V adapted_term(V bk, V bk1, V inv_sigma_ttm, V merton, V b, V r_dt,
                      V mu_minus_r_dt, V neg_half_sigma2_dt, V sigma,
                      bool clamp, V zero, V one) {
  V pi = merton + (b - bk) * inv_sigma_ttm;
  if (clamp) {
    pi = select(pi < zero, zero, pi);
    pi = select(pi > one, one, pi);
  }
  return r_dt + pi * mu_minus_r_dt + (pi * pi) * neg_half_sigma2_dt +
         pi * sigma * (bk1 - bk);
}

}  // namespace ilab::kern::detail
