#pragma once

#include <string_view>
#include <vector>

#include "ilab/market.hpp"

namespace ilab {

enum class Constraint { AllowShort, NoShort };

enum class StrategyKind {
  Honest,
  BridgeInsider,
  ForwardDeterministic,
  ForwardAdapted,
  SkorokhodInsider,
};

struct StrategySpec {
  StrategyKind kind = StrategyKind::Honest;
  Constraint constraint = Constraint::NoShort;
};
// SkorokhodInsider requires NoShort: the unconstrained objective is affine in
// pi and has no optimum.
void validate(const StrategySpec& spec);

// CLI names: honest | bridge | forward-det | forward-adapted | skorokhod.
StrategyKind strategy_from_name(std::string_view name);
const char* strategy_name(StrategyKind kind);

// pi* = (mu - r) / sigma^2, clamped to [0,1] under NoShort.
double merton_pi(const MarketParams& p, Constraint c);

// Bridge and deterministic-forward insiders share one optimum:
// pi* = (mu - r)/sigma^2 + b/(sigma T).
double bridge_or_forward_pi_det(const MarketParams& p, double b, Constraint c);

// Adapted forward insider, pi*_t = (mu - r)/sigma^2 + (b - B_t)/(sigma (T-t)).
// Requires t < T.
double forward_pi_adapted(const MarketParams& p, double b, double t,
                          double B_t, Constraint c);

// Skorokhod insider under no shorting: pi* = 1{b > -theta T}, with the tie
// b == -theta T resolved to the risk-free asset. Rejects AllowShort.
double skorokhod_pi(const MarketParams& p, double b, Constraint c);

// Deterministic-parameter Skorokhod candidate: pi_t = (mu_t - r_t)/sigma_t^2
// + b/(sigma_t T), valid only when b equals the integral condition value
// b_required = integral of (r_t - mu_t)/sigma_t dt (trapezoidal on the grid).
// A mismatch is flagged, not thrown.
struct SkorokhodDetResult {
  std::vector<double> pi;
  double b_required = 0.0;
  bool matches = false;
};
SkorokhodDetResult skorokhod_pi_det_params(const ParamCurves& c, double b);

}  // namespace ilab
