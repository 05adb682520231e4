#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ilab/wealth.hpp"

namespace ilab {

void validate(const MCConfig& cfg) {
  if (cfg.n_paths < 1)
    throw std::invalid_argument("MCConfig: n_paths must be >= 1");
}

SamplePath stock_from_driving(double S0, const MarketParams& p,
                              const SamplePath& driving) {
  validate(p);
  if (!(S0 > 0.0)) throw std::invalid_argument("stock_from_driving: S0 must be > 0");
  const std::size_t n = driving.grid.n_steps;
  const double dt = driving.grid.dt();
  const double drift = (p.mu - 0.5 * p.sigma * p.sigma) * dt;
  std::vector<double> s(n + 1);
  double log_s = std::log(S0);
  s[0] = S0;
  for (std::size_t k = 0; k < n; ++k) {
    log_s += drift + p.sigma * (driving.values[k + 1] - driving.values[k]);
    s[k + 1] = std::exp(log_s);
  }
  return {driving.grid, std::move(s)};
}

double implied_b(double S0, double S_T, const MarketParams& p) {
  validate(p);
  if (!(S0 > 0.0 && S_T > 0.0))
    throw std::invalid_argument("implied_b: prices must be > 0");
  if (p.sigma == 0.0) throw std::invalid_argument("implied_b: sigma must be > 0");
  return (std::log(S_T / S0) - (p.mu - 0.5 * p.sigma * p.sigma) * p.T) / p.sigma;
}

WealthPath simulate_wealth(const SamplePath& stock, const StrategySpec& spec,
                           const MarketParams& p, double b) {
  validate(spec);
  validate(p);
  const std::size_t n = stock.grid.n_steps;
  for (double s : stock.values)
    if (!(s > 0.0))
      throw std::invalid_argument("simulate_wealth: stock values must be > 0");

  const bool adapted = spec.kind == StrategyKind::ForwardAdapted;
  if (adapted) require_positive_sigma(p);
  double const_pi = 0.0;
  switch (spec.kind) {
    case StrategyKind::Honest:
      const_pi = merton_pi(p, spec.constraint);
      break;
    case StrategyKind::BridgeInsider:
    case StrategyKind::ForwardDeterministic:
      const_pi = bridge_or_forward_pi_det(p, b, spec.constraint);
      break;
    case StrategyKind::SkorokhodInsider:
      const_pi = skorokhod_pi(p, b, spec.constraint);
      break;
    case StrategyKind::ForwardAdapted:
      break;
  }

  const double dt = stock.grid.dt();
  const double drift = (p.mu - 0.5 * p.sigma * p.sigma);
  WealthPath wp{stock.grid, std::vector<double>(n + 1), std::vector<double>(n)};
  wp.wealth[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double pi = const_pi;
    if (adapted) {
      const double t_k = stock.grid.t(k);
      const double B_k =
          (std::log(stock.values[k] / stock.values[0]) - drift * t_k) / p.sigma;
      pi = forward_pi_adapted(p, b, t_k, B_k, spec.constraint);
    }
    wp.pi[k] = pi;
    const double log_ret = std::log(stock.values[k + 1] / stock.values[k]);
    wp.wealth[k + 1] =
        wp.wealth[k] * std::exp((1.0 - pi) * p.r * dt + pi * log_ret);
  }
  return wp;
}

double skorokhod_terminal_wealth(const MarketParams& p, double b, double pi) {
  validate(p);
  if (!std::isfinite(pi))
    throw std::invalid_argument("skorokhod_terminal_wealth: pi must be finite");
  return std::exp((1.0 - pi) * p.r * p.T + pi * p.mu * p.T + p.sigma * pi * b);
}

void write_wealth_csv(std::ostream& os, const WealthPath& wp) {
  os << "t,wealth,pi\n";
  const std::size_t n = wp.pi.size();
  for (std::size_t k = 0; k < wp.wealth.size(); ++k) {
    const double pi = n == 0 ? 0.0 : wp.pi[k < n ? k : n - 1];
    os << format_full(wp.grid.t(k)) << ',' << format_full(wp.wealth[k]) << ','
       << format_full(pi) << '\n';
  }
}

}  // namespace ilab
