#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ilab/market_data.hpp"

namespace ilab {

bool PriceSeries::has_rates() const {
  return !records.empty() &&
         std::all_of(records.begin(), records.end(),
                     [](const PriceRecord& r) { return r.rate.has_value(); });
}

namespace {

bool parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

bool parse_number(std::string_view s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void reject(const std::string& name, std::size_t line,
                         const std::string& why) {
  std::ostringstream oss;
  oss << name << ":" << line << ": " << why;
  throw DataError(oss.str());
}

}  // namespace

PriceSeries parse_price_csv(std::istream& in, const std::string& name) {
  PriceSeries series;
  std::string line;
  std::size_t lineno = 0;
  bool saw_rate_column = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (lineno == 1 && !cells.empty() && cells[0] == "date") continue;  // header
    if (cells.size() != 2 && cells.size() != 3)
      reject(name, lineno, "expected date,price[,rate]");
    PriceRecord rec;
    rec.date = cells[0];
    if (!parse_iso_date(rec.date))
      reject(name, lineno, "malformed ISO-8601 date '" + cells[0] + "'");
    if (!parse_number(cells[1], rec.price))
      reject(name, lineno, "malformed price '" + cells[1] + "'");
    if (rec.price <= 0.0) reject(name, lineno, "non-positive price");
    if (cells.size() == 3) {
      double rate = 0.0;
      if (!parse_number(cells[2], rate))
        reject(name, lineno, "malformed rate '" + cells[2] + "'");
      rec.rate = rate;
      saw_rate_column = true;
    } else if (saw_rate_column) {
      reject(name, lineno, "rate column is present on some rows but not here");
    }
    if (!series.records.empty() && series.records.back().date >= rec.date)
      reject(name, lineno, "dates not strictly increasing at '" + rec.date + "'");
    series.records.push_back(std::move(rec));
  }
  if (series.records.empty()) throw DataError(name + ": no records");
  return series;
}

PriceSeries load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  return parse_price_csv(in, file.filename().string());
}

EstimatedParams estimate_params(const PriceSeries& s,
                                std::optional<double> r_const,
                                std::size_t horizon_steps, SigmaWindow window) {
  const std::size_t n = s.records.size();
  if (n < 2) throw DataError("estimate_params: need at least 2 prices");
  std::vector<double> log_returns(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    log_returns[i] = std::log(s.records[i + 1].price / s.records[i].price);

  const MeanVar mv = mean_and_variance(log_returns);
  double sigma = log_returns.size() >= 2 ? std::sqrt(mv.variance) : 0.0;
  std::string convention = "per-step";
  if (window == SigmaWindow::Monthly) {
    constexpr std::size_t kMonth = 21;
    const std::size_t months = log_returns.size() / kMonth;
    if (months < 2)
      throw DataError("estimate_params: monthly sigma needs >= 42 returns");
    std::vector<double> monthly(months);
    for (std::size_t m = 0; m < months; ++m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < kMonth; ++k) acc += log_returns[m * kMonth + k];
      monthly[m] = acc;
    }
    sigma = std::sqrt(mean_and_variance(monthly).variance / double(kMonth));
    convention = "per-step (sigma from monthly windows)";
  }

  double r = 0.0;
  if (r_const.has_value()) {
    r = *r_const;
  } else if (s.has_rates()) {
    std::vector<double> rates;
    rates.reserve(n);
    for (const auto& rec : s.records) rates.push_back(*rec.rate);
    r = mean_and_variance(rates).mean;
  } else {
    throw DataError("estimate_params: no risk-free rate given and no rate column");
  }

  EstimatedParams est;
  est.params.mu = mv.mean;
  est.params.r = r;
  est.params.sigma = sigma;
  est.params.T = double(horizon_steps);
  est.sample_size = n;
  est.period_convention = convention;
  if (horizon_steps < 1) throw DataError("estimate_params: horizon_steps must be >= 1");
  return est;
}

BacktestResult backtest(const PriceSeries& s, const EstimatedParams& est,
                        const std::vector<StrategyKind>& strategies,
                        const BacktestOptions& opts) {
  const std::size_t horizon = std::size_t(est.params.T);
  if (horizon + 1 > s.records.size())
    throw DataError("backtest: horizon exceeds series length");
  if (est.params.sigma <= 0.0)
    throw DataError("backtest: estimated sigma must be > 0 (constant prices?)");

  TimeGrid grid(double(horizon), horizon);
  std::vector<double> prices(horizon + 1);
  for (std::size_t k = 0; k <= horizon; ++k) prices[k] = s.records[k].price;
  const SamplePath stock{grid, prices};

  BacktestResult result;
  result.params = est;
  result.implied_b = implied_b(prices.front(), prices.back(), est.params);
  for (std::size_t k = 0; k <= horizon; ++k)
    result.dates.push_back(s.records[k].date);

  const double b = result.implied_b;
  const double pi_sk = skorokhod_pi(est.params, b, Constraint::NoShort);
  result.skorokhod_closed_form_terminal =
      skorokhod_terminal_wealth(est.params, b, pi_sk);

  for (StrategyKind kind : strategies) {
    WealthPath wp{grid, std::vector<double>(horizon + 1),
                  std::vector<double>(horizon)};
    wp.wealth[0] = 1.0;
    MarketParams cur = est.params;
    for (std::size_t k = 0; k < horizon; ++k) {
      if (opts.rolling_window >= 2 && k >= opts.rolling_window) {
        // Re-estimate on the trailing window; no fidelity claim is made for
        // this option, the reference protocol fixes parameters at t = 0.
        PriceSeries window;
        window.records.assign(s.records.begin() + long(k - opts.rolling_window),
                              s.records.begin() + long(k + 1));
        const EstimatedParams roll = estimate_params(
            window, est.params.r, horizon, SigmaWindow::PerStep);
        if (roll.params.sigma > 0.0) cur = roll.params;
        cur.T = est.params.T;
      }
      double pi = 0.0;
      const double rate =
          s.records[k].rate.has_value() ? *s.records[k].rate : cur.r;
      switch (kind) {
        case StrategyKind::Honest:
          pi = merton_pi(cur, Constraint::NoShort);
          break;
        case StrategyKind::BridgeInsider:
        case StrategyKind::ForwardDeterministic:
          pi = bridge_or_forward_pi_det(cur, b, Constraint::NoShort);
          break;
        case StrategyKind::ForwardAdapted: {
          const double t_k = grid.t(k);
          const double drift = cur.mu - 0.5 * cur.sigma * cur.sigma;
          const double B_k =
              (std::log(prices[k] / prices[0]) - drift * t_k) / cur.sigma;
          pi = forward_pi_adapted(cur, b, t_k, B_k, Constraint::NoShort);
          break;
        }
        case StrategyKind::SkorokhodInsider:
          pi = skorokhod_pi(cur, b, Constraint::NoShort);
          break;
      }
      wp.pi[k] = pi;
      const double log_ret = std::log(prices[k + 1] / prices[k]);
      wp.wealth[k + 1] =
          wp.wealth[k] * std::exp((1.0 - pi) * rate + pi * log_ret);
    }
    result.runs.push_back({kind, std::move(wp)});
  }
  return result;
}

}  // namespace ilab
