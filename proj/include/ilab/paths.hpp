#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ilab/common.hpp"

namespace ilab {

// Uniform grid t_k = T*k/n on [0, T].
struct TimeGrid {
  TimeGrid(double horizon, std::size_t steps);
  double T;
  std::size_t n_steps;
  double dt() const { return T / double(n_steps); }
  double t(std::size_t k) const { return T * (double(k) / double(n_steps)); }
};

struct SamplePath {
  SamplePath(TimeGrid g, std::vector<double> v);
  TimeGrid grid;
  std::vector<double> values;  // n_steps + 1 points, values[0] is the start
};

// Brownian motion conditioned to end at b at time T.
struct BridgeSpec {
  double b = 0.0;
  double T = 1.0;
};
void validate(const BridgeSpec& spec);

// Standard Brownian motion from independent N(0, dt) increments.
SamplePath sample_brownian(const TimeGrid& grid, RngStream rng);
SamplePath brownian_from_normals(const TimeGrid& grid,
                                 std::span<const double> z);

// Pins a Brownian path to the terminal value: B_t = W_t - (W_T - b) t / T.
// The terminal point is set to b exactly.
SamplePath bridge_from_brownian(const SamplePath& w, const BridgeSpec& spec);

// Left-to-right conditional sampling: given B(u) at the last grid point and
// the pinned B(T) = b,
//   B(s) | B(u), B(T)  ~  N( ((T-s)B(u) + (s-u)b)/(T-u), (s-u)(T-s)/(T-u) ).
// Consumes n_steps - 1 normals; endpoints are exact.
SamplePath sample_bridge_sequential(const BridgeSpec& spec,
                                    const TimeGrid& grid, RngStream rng);
SamplePath bridge_sequential_from_normals(const BridgeSpec& spec,
                                          const TimeGrid& grid,
                                          std::span<const double> z);

// First and second moments of the conditioned process:
// mean b t/T, cov(s,t) = s (1 - t/T) for s <= t.
double bridge_mean(double t, const BridgeSpec& spec);
double bridge_cov(double s, double t, const BridgeSpec& spec);

// CSV export, header "t,value", one row per grid point, 17 significant digits.
void write_path_csv(std::ostream& os, const SamplePath& path);

}  // namespace ilab
