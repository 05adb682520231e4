#pragma once

#include <cstddef>
#include <cstdint>

// Runtime-dispatched compute kernels. Every kernel has a scalar reference
// implementation and (on x86-64) an AVX2 variant; the two are bit-for-bit
// equivalent, so dispatch never changes results, only speed. Selection
// happens once, from CPUID and the ILAB_KERNELS environment variable
// (values: auto | scalar | avx2).

namespace ilab::kern {

enum class Isa { Scalar = 0, Avx2 = 1 };

Isa active_isa();
bool isa_available(Isa isa);
void force_isa(Isa isa);  // throws std::runtime_error if unavailable
const char* isa_name(Isa isa);

// Counter-based RNG: Philox4x32-10. A (seed, stream) pair names an
// independent sequence of doubles indexed by offset. Values depend only on
// (seed, stream, index), never on how generation is batched or threaded.
void fill_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t offset,
              double* out, std::size_t n);

// Standard normal variates: inverse CDF applied to fill_u01 output.
void fill_gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t offset,
                double* out, std::size_t n);

// Inverse standard-normal CDF (Wichura's AS 241, double precision).
// Inputs outside (0,1) produce NaN.
void norminv(const double* p, double* z, std::size_t n);

// Natural log for positive normal doubles. Internal math primitive behind
// norminv's tail branch, exposed for accuracy tests.
void log_e(const double* x, double* out, std::size_t n);

// Pins a Brownian path to a terminal value: out[k] = w[k] - c*(k*inv_n).
void bridge_transform(const double* w, std::size_t n_points, double c,
                      double inv_n, double* out);

// Per-step log-wealth increments for the adapted insider portfolio:
//   pi_k   = merton + (b - bridge[k]) * inv_sigma_ttm[k]
//   pi_k   = min(max(pi_k, 0), 1)                   if clamp
//   out[k] = r_dt + pi_k*mu_minus_r_dt + pi_k^2*neg_half_sigma2_dt
//            + pi_k*sigma*(bridge[k+1] - bridge[k])
struct AdaptedStepParams {
  double merton = 0.0;
  double b = 0.0;
  double r_dt = 0.0;
  double mu_minus_r_dt = 0.0;
  double neg_half_sigma2_dt = 0.0;
  double sigma = 0.0;
  bool clamp = false;
};
void adapted_wealth_terms(const double* bridge, const double* inv_sigma_ttm,
                          std::size_t n_steps, const AdaptedStepParams& p,
                          double* out);

// Raw Philox4x32-10 block function, exposed for known-answer tests.
void philox4x32_10(const std::uint32_t ctr[4], const std::uint32_t key[2],
                   std::uint32_t out[4]);

namespace detail {

struct KernelTable {
  void (*fill_u01)(std::uint64_t, std::uint64_t, std::uint64_t, double*,
                   std::size_t);
  void (*fill_gauss)(std::uint64_t, std::uint64_t, std::uint64_t, double*,
                     std::size_t);
  void (*norminv)(const double*, double*, std::size_t);
  void (*log_e)(const double*, double*, std::size_t);
  void (*bridge_transform)(const double*, std::size_t, double, double,
                           double*);
  void (*adapted_wealth_terms)(const double*, const double*, std::size_t,
                               const AdaptedStepParams&, double*);
};

const KernelTable& scalar_table();
#if defined(__x86_64__)
const KernelTable& avx2_table();
#endif
const KernelTable& table();
// nullptr when the ISA is not compiled in / not runnable here
const KernelTable* table_for(Isa isa);

}  // namespace detail

}  // namespace ilab::kern
