#include "ilab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "lane_math.hpp"

namespace ilab::kern {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa resolve_from_env() {
  const char* env = std::getenv("ILAB_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_has_avx2())
        throw std::runtime_error("ILAB_KERNELS=avx2 but CPU lacks AVX2");
      return Isa::Avx2;
    }
    // anything else (including "auto") falls through to detection
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& isa_slot() {
  static std::atomic<int> slot{static_cast<int>(resolve_from_env())};
  return slot;
}

}  // namespace

Isa active_isa() { return static_cast<Isa>(isa_slot().load()); }

bool isa_available(Isa isa) {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

void force_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error("requested kernel ISA is not available on this CPU");
  isa_slot().store(static_cast<int>(isa));
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

namespace detail {
const KernelTable& table() {
#if defined(__x86_64__)
  if (active_isa() == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

const KernelTable* table_for(Isa isa) {
  if (isa == Isa::Scalar) return &scalar_table();
#if defined(__x86_64__)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return &avx2_table();
#endif
  return nullptr;
}
}  // namespace detail

void fill_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t offset,
              double* out, std::size_t n) {
  detail::table().fill_u01(seed, stream, offset, out, n);
}

void fill_gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t offset,
                double* out, std::size_t n) {
  detail::table().fill_gauss(seed, stream, offset, out, n);
}

void norminv(const double* p, double* z, std::size_t n) {
  detail::table().norminv(p, z, n);
}

void log_e(const double* x, double* out, std::size_t n) {
  detail::table().log_e(x, out, n);
}

void bridge_transform(const double* w, std::size_t n_points, double c,
                      double inv_n, double* out) {
  detail::table().bridge_transform(w, n_points, c, inv_n, out);
}

void adapted_wealth_terms(const double* bridge, const double* inv_sigma_ttm,
                          std::size_t n_steps, const AdaptedStepParams& p,
                          double* out) {
  detail::table().adapted_wealth_terms(bridge, inv_sigma_ttm, n_steps, p, out);
}

void philox4x32_10(const std::uint32_t ctr[4], const std::uint32_t key[2],
                   std::uint32_t out[4]) {
  detail::philox_block(ctr[0], ctr[1], ctr[2], ctr[3], key[0], key[1], out);
}

}  // namespace ilab::kern
