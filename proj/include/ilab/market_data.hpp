#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ilab/wealth.hpp"

namespace ilab {

struct PriceRecord {
  std::string date;  // ISO-8601 day
  double price = 0.0;
  std::optional<double> rate;  // per-step short rate, if provided
};

struct PriceSeries {
  std::vector<PriceRecord> records;
  bool has_rates() const;
};

// CSV with header "date,price" or "date,price,rate" (header optional).
// Malformed rows, non-monotone dates and non-positive prices are rejected
// with the offending line number.
PriceSeries load_csv(const std::filesystem::path& file);
PriceSeries parse_price_csv(std::istream& in, const std::string& name);

enum class SigmaWindow { PerStep, Monthly };

// Everything is in per-step (daily) units: mu = mean of per-step log returns,
// sigma = their sample standard deviation (n-1), r = the constant rate or the
// mean of the provided rate series, T = horizon_steps. SigmaWindow::Monthly
// instead uses non-overlapping 21-step aggregated returns scaled back to one
// step.
struct EstimatedParams {
  MarketParams params;
  std::size_t sample_size = 0;
  std::string period_convention = "per-step";
};
EstimatedParams estimate_params(const PriceSeries& s,
                                std::optional<double> r_const,
                                std::size_t horizon_steps,
                                SigmaWindow window = SigmaWindow::PerStep);

struct BacktestOptions {
  std::size_t rolling_window = 0;  // 0 = parameters fixed at t = 0
};

struct BacktestStrategyRun {
  StrategyKind kind;
  WealthPath path;
};

struct BacktestResult {
  std::vector<BacktestStrategyRun> runs;
  double implied_b = 0.0;
  // Anticipating-solution wealth of the Skorokhod trader,
  // exp{(1-pi)rT + pi mu T + sigma pi b}, reported alongside the discretely
  // updated wealth.
  double skorokhod_closed_form_terminal = 0.0;
  EstimatedParams params;
  std::vector<std::string> dates;  // horizon_steps + 1 entries
};

// Runs the three-portfolio protocol on the first horizon_steps returns of the
// series: b implied from the terminal price, then the common discrete update
// for every strategy. Honest and forward portfolios are clamped to [0,1].
BacktestResult backtest(const PriceSeries& s, const EstimatedParams& est,
                        const std::vector<StrategyKind>& strategies,
                        const BacktestOptions& opts = {});

}  // namespace ilab
