// Scalar reference kernels. These define the results; the AVX2 variants are
// required to reproduce them bit for bit (see test_kernels.cpp).

#include "ilab/kernels.hpp"
#include "lane_math.hpp"

namespace ilab::kern::detail {
namespace {

void fill_u01_scalar(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t offset, double* out, std::size_t n) {
  std::size_t i = 0;
  std::uint64_t g = offset;
  while (i < n) {
    std::uint64_t v0, v1;
    philox_block_u64(seed, stream, g >> 1, v0, v1);
    if ((g & 1) == 0) {
      out[i++] = u01_from_u64(v0);
      ++g;
      if (i == n) break;
    }
    out[i++] = u01_from_u64(v1);
    ++g;
  }
}

void norminv_scalar(const double* p, double* z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) z[i] = norminv_core(p[i]);
}

void fill_gauss_scalar(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t offset, double* out, std::size_t n) {
  fill_u01_scalar(seed, stream, offset, out, n);
  norminv_scalar(out, out, n);
}

void log_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = vlog_core(x[i]);
}

void bridge_transform_scalar(const double* w, std::size_t n_points, double c,
                             double inv_n, double* out) {
  for (std::size_t k = 0; k < n_points; ++k)
    out[k] = bridge_point(w[k], c, double(k), inv_n);
}

void adapted_wealth_terms_scalar(const double* bridge,
                                 const double* inv_sigma_ttm,
                                 std::size_t n_steps,
                                 const AdaptedStepParams& p, double* out) {
  for (std::size_t k = 0; k < n_steps; ++k)
    out[k] = adapted_term(bridge[k], bridge[k + 1], inv_sigma_ttm[k], p.merton,
                          p.b, p.r_dt, p.mu_minus_r_dt, p.neg_half_sigma2_dt,
                          p.sigma, p.clamp, 0.0, 1.0);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {fill_u01_scalar,
                                fill_gauss_scalar,
                                norminv_scalar,
                                log_scalar,
                                bridge_transform_scalar,
                                adapted_wealth_terms_scalar};
  return t;
}

}  // namespace ilab::kern::detail
