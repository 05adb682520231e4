#include <cmath>
#include <stdexcept>

#include "ilab/kernels.hpp"
#include "ilab/paths.hpp"

namespace ilab {

void validate(const BridgeSpec& spec) {
  if (!std::isfinite(spec.b)) throw std::invalid_argument("BridgeSpec: b must be finite");
  if (!(std::isfinite(spec.T) && spec.T > 0.0))
    throw std::invalid_argument("BridgeSpec: T must be finite and > 0");
}

SamplePath brownian_from_normals(const TimeGrid& grid,
                                 std::span<const double> z) {
  if (z.size() != grid.n_steps)
    throw std::invalid_argument("brownian_from_normals: need n_steps normals");
  const double sdt = std::sqrt(grid.dt());
  std::vector<double> w(grid.n_steps + 1);
  w[0] = 0.0;
  for (std::size_t k = 0; k < grid.n_steps; ++k) w[k + 1] = w[k] + sdt * z[k];
  return {grid, std::move(w)};
}

SamplePath sample_brownian(const TimeGrid& grid, RngStream rng) {
  std::vector<double> z(grid.n_steps);
  kern::fill_gauss(rng.seed, rng.stream, 0, z.data(), z.size());
  return brownian_from_normals(grid, z);
}

SamplePath bridge_from_brownian(const SamplePath& w, const BridgeSpec& spec) {
  validate(spec);
  if (w.grid.T != spec.T)
    throw std::invalid_argument("bridge_from_brownian: horizon mismatch");
  const std::size_t n = w.grid.n_steps;
  std::vector<double> out(n + 1);
  const double c = w.values[n] - spec.b;
  kern::bridge_transform(w.values.data(), n + 1, c, 1.0 / double(n), out.data());
  out[n] = spec.b;  // pin exactly
  return {w.grid, std::move(out)};
}

SamplePath bridge_sequential_from_normals(const BridgeSpec& spec,
                                          const TimeGrid& grid,
                                          std::span<const double> z) {
  validate(spec);
  if (grid.T != spec.T)
    throw std::invalid_argument("bridge_sequential_from_normals: horizon mismatch");
  const std::size_t n = grid.n_steps;
  if (z.size() + 1 < n)
    throw std::invalid_argument("bridge_sequential_from_normals: need n_steps - 1 normals");
  std::vector<double> bpath(n + 1);
  bpath[0] = 0.0;
  const double T = grid.T;
  const double dt = grid.dt();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ttm = T - grid.t(k);  // T - u
    const double mean = ((ttm - dt) * bpath[k] + dt * spec.b) / ttm;
    const double sd = std::sqrt(dt * (ttm - dt) / ttm);
    bpath[k + 1] = mean + sd * z[k];
  }
  bpath[n] = spec.b;
  return {grid, std::move(bpath)};
}

SamplePath sample_bridge_sequential(const BridgeSpec& spec,
                                    const TimeGrid& grid, RngStream rng) {
  std::vector<double> z(grid.n_steps > 0 ? grid.n_steps - 1 : 0);
  kern::fill_gauss(rng.seed, rng.stream, 0, z.data(), z.size());
  return bridge_sequential_from_normals(spec, grid, z);
}

double bridge_mean(double t, const BridgeSpec& spec) {
  validate(spec);
  if (!(t >= 0.0 && t <= spec.T))
    throw std::invalid_argument("bridge_mean: t outside [0, T]");
  return spec.b * t / spec.T;
}

double bridge_cov(double s, double t, const BridgeSpec& spec) {
  validate(spec);
  if (!(s >= 0.0 && t <= spec.T))
    throw std::invalid_argument("bridge_cov: arguments outside [0, T]");
  if (s > t) throw std::invalid_argument("bridge_cov: requires s <= t");
  return s * (1.0 - t / spec.T);
}

}  // namespace ilab
