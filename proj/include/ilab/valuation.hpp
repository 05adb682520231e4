#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ilab/market.hpp"

namespace ilab {

enum class Region { RiskFreeOnly, Interior, FullyInvested };
const char* region_name(Region r);

// Expected log-utility of terminal wealth (X_0 = 1, so log x drops out).
struct ValueBreakdown {
  double total = 0.0;
  Region region = Region::RiskFreeOnly;
};

// Honest trader under no shorting, piecewise in theta = (mu - r)/sigma:
//   rT                    theta <= 0
//   rT + theta^2 T / 2    0 < theta < sigma
//   mu T - sigma^2 T / 2  theta >= sigma
ValueBreakdown value_honest_noshort(const MarketParams& p);

// Forward insider under no shorting, piecewise in b:
//   rT                          b <= -theta T
//   rT + (theta + b/T)^2 T / 2  b in (-theta T, -theta T + sigma T]
//   mu T + sigma b - sigma^2T/2 b > -theta T + sigma T
ValueBreakdown value_forward_noshort(const MarketParams& p, double b);

// Skorokhod insider: V = rT + (theta sigma T + sigma b) 1{b > -theta T}.
ValueBreakdown value_skorokhod(const MarketParams& p, double b);

// Time-dependent deterministic parameters (bridge and forward coincide):
// V = integral of r_t + ((mu_t - r_t)/sigma_t + b/T)^2 / 2, trapezoidal.
double value_bb_or_forward_det(const ParamCurves& c, double b);

// Adapted forward insider truncated at T - eps:
// V(eps) = (T-eps)[r + (theta + b/T)^2/2] + log(T/eps)/2 - (T-eps)/(2T).
// Diverges like log(1/eps); accepts 0 < eps <= T.
double value_forward_adapted_truncated(const MarketParams& p, double b,
                                       double eps);

// E[V_sk(b)] for b ~ N(e, v), via the truncated-Gaussian first moment:
// rT + sigma[(theta T + e) Phi(z) + sqrt(v) phi(z)], z = (e + theta T)/sqrt(v).
double unconditional_skorokhod(const MarketParams& p,
                               const SignalDistribution& d);

// Same expectation by adaptive quadrature of V_sk(b) N(e,v)(db); oracle for
// the closed form above.
double unconditional_skorokhod_quadrature(const MarketParams& p,
                                          const SignalDistribution& d);

// E[V_fw(b)] by adaptive quadrature of the piecewise value against the
// Gaussian density (breakpoints inserted as panel edges).
double unconditional_forward_quadrature(const MarketParams& p,
                                        const SignalDistribution& d);

// An erf-form candidate for E[V_fw(b)] with b ~ N(0,1), T = 1. It does not
// agree with the quadrature for typical inputs; both numbers are reported
// side by side wherever it appears so the discrepancy stays visible.
double forward_unconditional_erf_candidate(const MarketParams& p);

struct ValueCurveRow {
  double b;
  double v_riskfree;
  double v_honest;
  double v_forward;
  double v_skorokhod;
};
std::vector<ValueCurveRow> value_curve(const MarketParams& p,
                                       std::span<const double> b_grid);
// CSV header: b,v_riskfree,v_honest,v_forward,v_skorokhod
void write_value_curve_csv(std::ostream& os,
                           std::span<const ValueCurveRow> rows);

double normal_pdf(double x, double mean, double variance);
double normal_cdf(double z);  // standard normal

}  // namespace ilab
