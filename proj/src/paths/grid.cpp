#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ilab/paths.hpp"

namespace ilab {

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : T(horizon), n_steps(steps) {
  if (!(std::isfinite(T) && T > 0.0))
    throw std::invalid_argument("TimeGrid: horizon must be finite and > 0");
  if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
}

SamplePath::SamplePath(TimeGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n_steps + 1)
    throw std::invalid_argument("SamplePath: values length must be n_steps + 1");
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
  os << "t,value\n";
  for (std::size_t k = 0; k < path.values.size(); ++k)
    os << format_full(path.grid.t(k)) << ',' << format_full(path.values[k])
       << '\n';
}

}  // namespace ilab
