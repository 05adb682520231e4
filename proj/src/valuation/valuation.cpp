#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ilab/quadrature.hpp"
#include "ilab/valuation.hpp"

namespace ilab {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::RiskFreeOnly: return "risk_free_only";
    case Region::Interior: return "interior";
    case Region::FullyInvested: return "fully_invested";
  }
  return "unknown";
}

double normal_pdf(double x, double mean, double variance) {
  const double s = std::sqrt(variance);
  const double z = (x - mean) / s;
  return kInvSqrt2Pi / s * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

ValueBreakdown value_honest_noshort(const MarketParams& p) {
  require_positive_sigma(p);
  const double theta = p.theta();
  if (theta <= 0.0) return {p.r * p.T, Region::RiskFreeOnly};
  if (theta < p.sigma)
    return {p.r * p.T + 0.5 * theta * theta * p.T, Region::Interior};
  return {p.mu * p.T - 0.5 * p.sigma * p.sigma * p.T, Region::FullyInvested};
}

ValueBreakdown value_forward_noshort(const MarketParams& p, double b) {
  require_positive_sigma(p);
  const double theta = p.theta();
  const double lo = -theta * p.T;
  const double hi = lo + p.sigma * p.T;
  if (b <= lo) return {p.r * p.T, Region::RiskFreeOnly};
  if (b <= hi) {
    const double s = theta + b / p.T;
    return {p.r * p.T + 0.5 * s * s * p.T, Region::Interior};
  }
  return {p.mu * p.T + p.sigma * b - 0.5 * p.sigma * p.sigma * p.T,
          Region::FullyInvested};
}

ValueBreakdown value_skorokhod(const MarketParams& p, double b) {
  require_positive_sigma(p);
  const double theta = p.theta();
  if (b <= -theta * p.T) return {p.r * p.T, Region::RiskFreeOnly};
  return {p.r * p.T + (theta * p.sigma * p.T + p.sigma * b),
          Region::FullyInvested};
}

double value_bb_or_forward_det(const ParamCurves& c, double b) {
  const std::size_t n = c.grid.n_steps;
  const double dt = c.grid.dt();
  const double T = c.grid.T;
  double acc = 0.0;
  auto integrand = [&](std::size_t k) {
    const double s = (c.mu[k] - c.r[k]) / c.sigma[k] + b / T;
    return c.r[k] + 0.5 * s * s;
  };
  for (std::size_t k = 0; k < n; ++k)
    acc += 0.5 * dt * (integrand(k) + integrand(k + 1));
  return acc;
}

double value_forward_adapted_truncated(const MarketParams& p, double b,
                                       double eps) {
  require_positive_sigma(p);
  if (!(eps > 0.0 && eps <= p.T))
    throw std::invalid_argument(
        "value_forward_adapted_truncated: requires 0 < eps <= T");
  const double s = p.theta() + b / p.T;
  const double span = p.T - eps;
  return span * (p.r + 0.5 * s * s) + 0.5 * std::log(p.T / eps) -
         span / (2.0 * p.T);
}

double unconditional_skorokhod(const MarketParams& p,
                               const SignalDistribution& d) {
  require_positive_sigma(p);
  validate(d);
  const double thetaT = p.theta() * p.T;
  const double sd = std::sqrt(d.variance);
  const double z = (d.mean + thetaT) / sd;
  const double phi = kInvSqrt2Pi * std::exp(-0.5 * z * z);
  return p.r * p.T +
         p.sigma * ((thetaT + d.mean) * normal_cdf(z) + sd * phi);
}

double unconditional_skorokhod_quadrature(const MarketParams& p,
                                          const SignalDistribution& d) {
  require_positive_sigma(p);
  validate(d);
  const double sd = std::sqrt(d.variance);
  const double a = d.mean - 10.0 * sd;
  const double b = d.mean + 10.0 * sd;
  const double breakpoints[] = {-p.theta() * p.T};
  return integrate(
      [&](double x) {
        return value_skorokhod(p, x).total * normal_pdf(x, d.mean, d.variance);
      },
      a, b, 1e-10, breakpoints);
}

double unconditional_forward_quadrature(const MarketParams& p,
                                        const SignalDistribution& d) {
  require_positive_sigma(p);
  validate(d);
  const double sd = std::sqrt(d.variance);
  const double a = d.mean - 10.0 * sd;
  const double b = d.mean + 10.0 * sd;
  const double lo = -p.theta() * p.T;
  const double breakpoints[] = {lo, lo + p.sigma * p.T};
  return integrate(
      [&](double x) {
        return value_forward_noshort(p, x).total *
               normal_pdf(x, d.mean, d.variance);
      },
      a, b, 1e-10, breakpoints);
}

double forward_unconditional_erf_candidate(const MarketParams& p) {
  require_positive_sigma(p);
  const double th = p.theta();
  const double sg = p.sigma;
  const double t1 = 0.25 * (th + 1.0) * std::erf((sg - th) / kSqrt2);
  const double t2 = 0.25 * (th + 1.0) * std::erf(th / kSqrt2);
  const double t3 = 0.25 * std::sqrt(2.0 / M_PI) *
                    std::exp(-0.5 * (th * th + sg * sg)) *
                    ((th - sg) * std::exp(th * sg) - th * std::exp(0.5 * sg * sg));
  const double t4 =
      0.25 * sg * (2.0 * th - sg) * (std::erf((th - sg) / kSqrt2) + 1.0);
  const double t5 = sg * kInvSqrt2Pi * std::exp(-0.5 * (th - sg) * (th - sg));
  return t1 + t2 + t3 + t4 + t5;
}

std::vector<ValueCurveRow> value_curve(const MarketParams& p,
                                       std::span<const double> b_grid) {
  require_positive_sigma(p);
  std::vector<ValueCurveRow> rows;
  rows.reserve(b_grid.size());
  const double v_rf = p.r * p.T;
  const double v_ho = value_honest_noshort(p).total;
  for (double b : b_grid)
    rows.push_back({b, v_rf, v_ho, value_forward_noshort(p, b).total,
                    value_skorokhod(p, b).total});
  return rows;
}

void write_value_curve_csv(std::ostream& os,
                           std::span<const ValueCurveRow> rows) {
  os << "b,v_riskfree,v_honest,v_forward,v_skorokhod\n";
  for (const auto& r : rows)
    os << format_full(r.b) << ',' << format_full(r.v_riskfree) << ','
       << format_full(r.v_honest) << ',' << format_full(r.v_forward) << ','
       << format_full(r.v_skorokhod) << '\n';
}

}  // namespace ilab
