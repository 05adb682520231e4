#include <cmath>
#include <stdexcept>
#include <string>

#include "ilab/strategies.hpp"

namespace ilab {

void validate(const MarketParams& p) {
  if (!(std::isfinite(p.mu) && std::isfinite(p.r) && std::isfinite(p.sigma) &&
        std::isfinite(p.T)))
    throw std::invalid_argument("MarketParams: all fields must be finite");
  if (p.sigma < 0.0) throw std::invalid_argument("MarketParams: sigma must be >= 0");
  if (!(p.T > 0.0)) throw std::invalid_argument("MarketParams: T must be > 0");
}

void require_positive_sigma(const MarketParams& p) {
  validate(p);
  if (!(p.sigma > 0.0))
    throw std::invalid_argument("operation requires sigma > 0");
}

ParamCurves::ParamCurves(TimeGrid g, std::vector<double> mu_,
                         std::vector<double> r_, std::vector<double> sigma_)
    : grid(g), mu(std::move(mu_)), r(std::move(r_)), sigma(std::move(sigma_)) {
  const std::size_t want = grid.n_steps + 1;
  if (mu.size() != want || r.size() != want || sigma.size() != want)
    throw std::invalid_argument("ParamCurves: curves must have n_steps + 1 points");
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("ParamCurves: sigma_t must be finite and > 0");
}

ParamCurves ParamCurves::constant(const MarketParams& p, std::size_t n_steps) {
  require_positive_sigma(p);
  TimeGrid g(p.T, n_steps);
  const std::size_t n = n_steps + 1;
  return ParamCurves(g, std::vector<double>(n, p.mu), std::vector<double>(n, p.r),
                     std::vector<double>(n, p.sigma));
}

void validate(const SignalDistribution& d) {
  if (!(std::isfinite(d.mean) && std::isfinite(d.variance) && d.variance > 0.0))
    throw std::invalid_argument("SignalDistribution: needs finite mean and variance > 0");
}

void validate(const StrategySpec& spec) {
  if (spec.kind == StrategyKind::SkorokhodInsider &&
      spec.constraint != Constraint::NoShort)
    throw std::invalid_argument(
        "SkorokhodInsider requires NoShort: the unconstrained objective has no optimum");
}

StrategyKind strategy_from_name(std::string_view name) {
  if (name == "honest") return StrategyKind::Honest;
  if (name == "bridge") return StrategyKind::BridgeInsider;
  if (name == "forward-det") return StrategyKind::ForwardDeterministic;
  if (name == "forward-adapted") return StrategyKind::ForwardAdapted;
  if (name == "skorokhod") return StrategyKind::SkorokhodInsider;
  throw std::invalid_argument("unknown strategy name: " + std::string(name));
}

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Honest: return "honest";
    case StrategyKind::BridgeInsider: return "bridge";
    case StrategyKind::ForwardDeterministic: return "forward-det";
    case StrategyKind::ForwardAdapted: return "forward-adapted";
    case StrategyKind::SkorokhodInsider: return "skorokhod";
  }
  return "unknown";
}

namespace {
double apply_constraint(double pi, Constraint c) {
  return c == Constraint::NoShort ? clamp01(pi) : pi;
}
}  // namespace

double merton_pi(const MarketParams& p, Constraint c) {
  validate(p);
  if (p.sigma == 0.0) {
    // Degenerate stock: expected log growth is linear in pi.
    if (c == Constraint::NoShort) return p.mu > p.r ? 1.0 : 0.0;
    throw std::invalid_argument("merton_pi: sigma = 0 with shorting allowed is unbounded");
  }
  return apply_constraint((p.mu - p.r) / (p.sigma * p.sigma), c);
}

double bridge_or_forward_pi_det(const MarketParams& p, double b, Constraint c) {
  require_positive_sigma(p);
  const double pi = (p.mu - p.r) / (p.sigma * p.sigma) + b / (p.sigma * p.T);
  return apply_constraint(pi, c);
}

double forward_pi_adapted(const MarketParams& p, double b, double t, double B_t,
                          Constraint c) {
  require_positive_sigma(p);
  if (!(t >= 0.0 && t < p.T))
    throw std::invalid_argument("forward_pi_adapted: requires 0 <= t < T");
  const double pi =
      (p.mu - p.r) / (p.sigma * p.sigma) + (b - B_t) / (p.sigma * (p.T - t));
  return apply_constraint(pi, c);
}

double skorokhod_pi(const MarketParams& p, double b, Constraint c) {
  require_positive_sigma(p);
  if (c != Constraint::NoShort)
    throw std::invalid_argument(
        "skorokhod_pi: optimum exists only under the no-shorting constraint");
  const double threshold = -p.theta() * p.T;
  return b > threshold ? 1.0 : 0.0;
}

SkorokhodDetResult skorokhod_pi_det_params(const ParamCurves& c, double b) {
  const std::size_t n = c.grid.n_steps;
  SkorokhodDetResult res;
  res.pi.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    res.pi[k] =
        (c.mu[k] - c.r[k]) / (c.sigma[k] * c.sigma[k]) + b / (c.sigma[k] * c.grid.T);
  // trapezoidal integral of (r_t - mu_t) / sigma_t
  const double dt = c.grid.dt();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double f0 = (c.r[k] - c.mu[k]) / c.sigma[k];
    const double f1 = (c.r[k + 1] - c.mu[k + 1]) / c.sigma[k + 1];
    acc += 0.5 * dt * (f0 + f1);
  }
  res.b_required = acc;
  res.matches = std::fabs(b - res.b_required) <= 1e-8 * std::fmax(1.0, std::fabs(b));
  return res;
}

}  // namespace ilab
