#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "ilab/strategies.hpp"

namespace ilab {

struct MCConfig {
  std::size_t n_paths = 0;
  std::uint64_t master_seed = 0;
  TimeGrid grid;
};
void validate(const MCConfig& cfg);

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
};

struct WealthPath {
  TimeGrid grid;
  std::vector<double> wealth;  // n_steps + 1 values, wealth[0] = 1
  std::vector<double> pi;      // n_steps left-point portfolio values
};

// Geometric stock path from a driving path:
// log S_{k+1} = log S_k + (mu - sigma^2/2) dt + sigma (B_{k+1} - B_k).
SamplePath stock_from_driving(double S0, const MarketParams& p,
                              const SamplePath& driving);

// b = (log(S_T/S_0) - (mu - sigma^2/2) T) / sigma. Requires sigma > 0.
double implied_b(double S0, double S_T, const MarketParams& p);

// Discrete backtest update, portfolio evaluated at the left grid point:
//   X_t = X_{t-1} exp{(1 - pi_{t-1}) r dt + pi_{t-1} log(S_t / S_{t-1})}.
// For ForwardAdapted the driving value B_t is recovered by inverting
// stock_from_driving.
WealthPath simulate_wealth(const SamplePath& stock, const StrategySpec& spec,
                           const MarketParams& p, double b);

inline constexpr std::size_t kFullHorizon = std::numeric_limits<std::size_t>::max();

// Monte Carlo estimate of E[log X_T] under bridge-driven dynamics. Log-wealth
// is integrated by Euler-Maruyama on
//   d log X = [r + pi (mu - r) - pi^2 sigma^2 / 2] dt + pi sigma dB
// with left-point portfolio evaluation (the forward-integral Riemann-sum
// convention). stop_index < n_steps accumulates only over t < t_stop, which
// is how the truncated adapted value is estimated. Deterministic for a fixed
// master seed, independent of thread count (threads = 0 picks a default).
MCEstimate mc_expected_log_utility(const StrategySpec& spec,
                                   const MarketParams& p, double b,
                                   const MCConfig& cfg,
                                   std::size_t stop_index = kFullHorizon,
                                   unsigned threads = 0);

// Per-path log X_T samples behind the estimate, in path-index order.
std::vector<double> mc_log_wealth_samples(const StrategySpec& spec,
                                          const MarketParams& p, double b,
                                          const MCConfig& cfg,
                                          std::size_t stop_index = kFullHorizon,
                                          unsigned threads = 0);

// Explicit Skorokhod terminal wealth for a constant portfolio:
//   X_T = exp{(1 - pi) r T + pi mu T + sigma pi b},
// path-independent because the anticipating correction cancels the noise.
double skorokhod_terminal_wealth(const MarketParams& p, double b, double pi);

// CSV export, header "t,wealth,pi" (pi repeats its last left-point value on
// the final row).
void write_wealth_csv(std::ostream& os, const WealthPath& wp);

}  // namespace ilab
