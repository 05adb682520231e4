#pragma once

#include <vector>

#include "ilab/paths.hpp"

namespace ilab {

// Constant-rate market: drift mu, risk-free rate r, volatility sigma > 0,
// horizon T. sigma == 0 is tolerated where the formulas stay finite
// (degenerate deterministic stock); operations that divide by sigma reject it.
struct MarketParams {
  double mu = 0.0;
  double r = 0.0;
  double sigma = 0.0;
  double T = 0.0;
  double theta() const { return (mu - r) / sigma; }  // market price of risk
};
void validate(const MarketParams& p);
void require_positive_sigma(const MarketParams& p);

// Deterministic time-dependent parameters sampled on a grid (n_steps + 1
// points each).
struct ParamCurves {
  ParamCurves(TimeGrid g, std::vector<double> mu, std::vector<double> r,
              std::vector<double> sigma);
  static ParamCurves constant(const MarketParams& p, std::size_t n_steps);
  TimeGrid grid;
  std::vector<double> mu;
  std::vector<double> r;
  std::vector<double> sigma;
};

// Law of the terminal signal b ~ N(mean, variance).
struct SignalDistribution {
  double mean = 0.0;
  double variance = 1.0;
};
void validate(const SignalDistribution& d);

}  // namespace ilab
