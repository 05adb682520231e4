#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ilab/kernels.hpp"
#include "ilab/wealth.hpp"

namespace ilab {

namespace {

struct McPlan {
  bool adapted = false;
  double const_pi = 0.0;
  kern::AdaptedStepParams adapted_params;
  std::vector<double> inv_sigma_ttm;  // 1/(sigma (T - t_k)), left points
  std::size_t k_stop = 0;
};

McPlan make_plan(const StrategySpec& spec, const MarketParams& p, double b,
                 const TimeGrid& grid, std::size_t stop_index) {
  validate(spec);
  validate(p);
  McPlan plan;
  plan.k_stop = stop_index == kFullHorizon
                    ? grid.n_steps
                    : std::min(stop_index, grid.n_steps);
  switch (spec.kind) {
    case StrategyKind::Honest:
      plan.const_pi = merton_pi(p, spec.constraint);
      break;
    case StrategyKind::BridgeInsider:
    case StrategyKind::ForwardDeterministic:
      plan.const_pi = bridge_or_forward_pi_det(p, b, spec.constraint);
      break;
    case StrategyKind::SkorokhodInsider:
      plan.const_pi = skorokhod_pi(p, b, spec.constraint);
      break;
    case StrategyKind::ForwardAdapted: {
      require_positive_sigma(p);
      plan.adapted = true;
      const double dt = grid.dt();
      plan.adapted_params.merton = (p.mu - p.r) / (p.sigma * p.sigma);
      plan.adapted_params.b = b;
      plan.adapted_params.r_dt = p.r * dt;
      plan.adapted_params.mu_minus_r_dt = (p.mu - p.r) * dt;
      plan.adapted_params.neg_half_sigma2_dt = -0.5 * p.sigma * p.sigma * dt;
      plan.adapted_params.sigma = p.sigma;
      plan.adapted_params.clamp = spec.constraint == Constraint::NoShort;
      plan.inv_sigma_ttm.resize(plan.k_stop);
      for (std::size_t k = 0; k < plan.k_stop; ++k)
        plan.inv_sigma_ttm[k] = 1.0 / (p.sigma * (grid.T - grid.t(k)));
      break;
    }
  }
  return plan;
}

// One bridge-driven path's log X contribution. Buffers are caller-owned and
// reused across paths.
double one_path(const McPlan& plan, const MarketParams& p, double b,
                const TimeGrid& grid, std::uint64_t master_seed,
                std::uint64_t path_index, std::vector<double>& z,
                std::vector<double>& path, std::vector<double>& terms) {
  const std::size_t n = grid.n_steps;
  const double sdt = std::sqrt(grid.dt());
  z.resize(n);
  path.resize(n + 1);
  kern::fill_gauss(master_seed, stream_id(kStreamPaths, path_index), 0,
                   z.data(), n);
  double w = 0.0;
  path[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w += sdt * z[k];
    path[k + 1] = w;
  }
  // pin to the terminal signal
  const double c = path[n] - b;
  kern::bridge_transform(path.data(), n + 1, c, 1.0 / double(n), path.data());
  path[n] = b;

  if (plan.adapted) {
    terms.resize(plan.k_stop);
    kern::adapted_wealth_terms(path.data(), plan.inv_sigma_ttm.data(),
                               plan.k_stop, plan.adapted_params, terms.data());
    double acc = 0.0;
    for (std::size_t k = 0; k < plan.k_stop; ++k) acc += terms[k];
    return acc;
  }
  const double pi = plan.const_pi;
  const double c0 =
      (p.r + pi * (p.mu - p.r) - 0.5 * pi * pi * p.sigma * p.sigma) * grid.dt();
  const double c1 = pi * p.sigma;
  double acc = 0.0;
  for (std::size_t k = 0; k < plan.k_stop; ++k)
    acc += c0 + c1 * (path[k + 1] - path[k]);
  return acc;
}

}  // namespace

std::vector<double> mc_log_wealth_samples(const StrategySpec& spec,
                                          const MarketParams& p, double b,
                                          const MCConfig& cfg,
                                          std::size_t stop_index,
                                          unsigned threads) {
  validate(cfg);
  const McPlan plan = make_plan(spec, p, b, cfg.grid, stop_index);
  std::vector<double> logx(cfg.n_paths);

  unsigned hw = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  hw = std::min<std::size_t>(hw, cfg.n_paths);

  auto worker = [&](std::size_t begin, std::size_t end) {
    std::vector<double> z, path, terms;
    for (std::size_t i = begin; i < end; ++i)
      logx[i] = one_path(plan, p, b, cfg.grid, cfg.master_seed, i, z, path, terms);
  };

  if (hw <= 1) {
    worker(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.n_paths + hw - 1) / hw;
    for (unsigned t = 0; t < hw; ++t) {
      const std::size_t begin = std::size_t(t) * chunk;
      const std::size_t end = std::min(begin + chunk, cfg.n_paths);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return logx;
}

MCEstimate mc_expected_log_utility(const StrategySpec& spec,
                                   const MarketParams& p, double b,
                                   const MCConfig& cfg, std::size_t stop_index,
                                   unsigned threads) {
  const std::vector<double> logx =
      mc_log_wealth_samples(spec, p, b, cfg, stop_index, threads);
  const MeanVar mv = mean_and_variance(logx);
  MCEstimate est;
  est.mean = mv.mean;
  est.std_error = std::sqrt(mv.variance / double(logx.size()));
  est.n_paths = logx.size();
  return est;
}

}  // namespace ilab
