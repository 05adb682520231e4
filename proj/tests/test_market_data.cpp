#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ilab/market_data.hpp"

using namespace ilab;

namespace {

PriceSeries series_from(const std::string& text) {
  std::istringstream in(text);
  return parse_price_csv(in, "mem");
}

// Frozen oracle for data/fixture_two_step.csv (prices 100, 104, 101, rate
// 0.004), computed independently with an arbitrary-precision scripted
// walkthrough of the estimation and wealth-update definitions.
constexpr double kFxMu = 0.004975165426584053;
constexpr double kFxSigma = 0.0484305180459904;
constexpr double kFxB = 0.04843051804599011;
constexpr double kFxPiHo = 0.4157574750409059;
constexpr double kFxPiFw = 0.915757475040903;
constexpr double kFxX2Ho = 1.0088497945501977;
constexpr double kFxX2Fw = 1.0098340698280706;
constexpr double kFxX2Sk = 1.01;
constexpr double kFxSkClosed = 1.0123717506300802;

const std::vector<StrategyKind> kMenu{StrategyKind::Honest,
                                      StrategyKind::ForwardDeterministic,
                                      StrategyKind::SkorokhodInsider};

}  // namespace

TEST_CASE("csv parsing accepts well-formed input") {
  const auto s = series_from("date,price\n2019-03-01,100\n2019-03-04,101\n");
  REQUIRE(s.records.size() == 2);
  CHECK(s.records[0].price == 100.0);
  CHECK_FALSE(s.has_rates());

  const auto with_rates =
      series_from("2019-03-01,100,0.002\n2019-03-04,101,0.003\n");
  CHECK(with_rates.has_rates());
}

TEST_CASE("csv parsing rejects malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(series_from(""), doctest::Contains("no records"),
                       DataError);
  CHECK_THROWS_WITH_AS(
      series_from("date,price\n2019-03-04,100\n2019-03-01,101\n"),
      doctest::Contains(":3:"), DataError);
  CHECK_THROWS_WITH_AS(series_from("date,price\n2019-03-01,oops\n"),
                       doctest::Contains(":2:"), DataError);
  CHECK_THROWS_WITH_AS(series_from("date,price\n2019-03-01,-5\n"),
                       doctest::Contains("non-positive"), DataError);
  CHECK_THROWS_WITH_AS(series_from("date,price\n03/01/2019,100\n"),
                       doctest::Contains("ISO-8601"), DataError);
  CHECK_THROWS_AS(series_from("2019-03-01,100,0.01\n2019-03-04,101\n"),
                  DataError);
  CHECK_THROWS_AS(load_csv("does/not/exist.csv"), DataError);
}

TEST_CASE("parameter estimation") {
  const auto flat = series_from("2019-03-01,100\n2019-03-04,100\n2019-03-05,100\n");
  const auto e0 = estimate_params(flat, 0.0, 2);
  CHECK(e0.params.mu == 0.0);
  CHECK(e0.params.sigma == 0.0);

  // constant log returns: mu = 0.01, sigma = 0
  std::ostringstream text;
  text << "2019-03-01,100\n";
  text << "2019-03-04," << format_full(100.0 * std::exp(0.01)) << "\n";
  text << "2019-03-05," << format_full(100.0 * std::exp(0.02)) << "\n";
  const auto e1 = estimate_params(series_from(text.str()), 0.0, 2);
  CHECK(e1.params.mu == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(e1.params.sigma == doctest::Approx(0.0).epsilon(1e-9));

  // returns {+0.01, -0.01}: mu = 0, sigma = 0.01 sqrt(2) (n-1 convention)
  std::ostringstream text2;
  text2 << "2019-03-01,100\n";
  text2 << "2019-03-04," << format_full(100.0 * std::exp(0.01)) << "\n";
  text2 << "2019-03-05," << format_full(100.0) << "\n";
  const auto e2 = estimate_params(series_from(text2.str()), 0.0, 2);
  CHECK(e2.params.mu == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e2.params.sigma == doctest::Approx(0.01 * std::sqrt(2.0)).epsilon(1e-10));

  // rate column average when no constant is supplied
  const auto er = estimate_params(
      series_from("2019-03-01,100,0.002\n2019-03-04,101,0.004\n"), std::nullopt, 1);
  CHECK(er.params.r == doctest::Approx(0.003).epsilon(1e-15));
  CHECK_THROWS_AS(
      estimate_params(series_from("2019-03-01,100\n2019-03-04,101\n"),
                      std::nullopt, 1),
      DataError);
  CHECK_THROWS_AS(estimate_params(flat, 0.0, 2, SigmaWindow::Monthly), DataError);
}

TEST_CASE("monthly sigma window") {
  // 43 prices -> 42 returns -> two 21-day windows
  std::ostringstream text;
  double logp = std::log(100.0);
  int day = 0;
  for (int i = 0; i < 43; ++i) {
    const int y = 2019, mo = 3 + day / 28;
    std::ostringstream date;
    date << y << "-" << (mo < 10 ? "0" : "") << mo << "-"
         << ((day % 28) + 1 < 10 ? "0" : "") << (day % 28) + 1;
    text << date.str() << "," << format_full(std::exp(logp)) << "\n";
    logp += (i % 2 == 0 ? 0.01 : -0.006);
    ++day;
  }
  const auto series = series_from(text.str());
  const auto per_step = estimate_params(series, 0.0, 42, SigmaWindow::PerStep);
  const auto monthly = estimate_params(series, 0.0, 42, SigmaWindow::Monthly);
  CHECK(monthly.params.mu == per_step.params.mu);
  CHECK(monthly.params.sigma >= 0.0);
  CHECK(monthly.params.sigma != per_step.params.sigma);
  CHECK(monthly.period_convention != per_step.period_convention);
}

TEST_CASE("two-step fixture reproduces the hand-computed wealths") {
  const PriceSeries s = load_csv("data/fixture_two_step.csv");
  REQUIRE(s.records.size() == 3);
  const EstimatedParams est = estimate_params(s, std::nullopt, 2);
  CHECK(std::fabs(est.params.mu - kFxMu) < 1e-12);
  CHECK(std::fabs(est.params.sigma - kFxSigma) < 1e-12);
  CHECK(std::fabs(est.params.r - 0.004) < 1e-15);

  const BacktestResult res = backtest(s, est, kMenu);
  CHECK(std::fabs(res.implied_b - kFxB) < 1e-12);
  REQUIRE(res.runs.size() == 3);
  const auto& ho = res.runs[0].path;
  const auto& fw = res.runs[1].path;
  const auto& sk = res.runs[2].path;
  CHECK(std::fabs(ho.pi[0] - kFxPiHo) < 1e-12);
  CHECK(std::fabs(fw.pi[0] - kFxPiFw) < 1e-12);
  CHECK(sk.pi[0] == 1.0);
  CHECK(std::fabs(ho.wealth[2] - kFxX2Ho) < 1e-12);
  CHECK(std::fabs(fw.wealth[2] - kFxX2Fw) < 1e-12);
  CHECK(std::fabs(sk.wealth[2] - kFxX2Sk) < 1e-12);
  CHECK(std::fabs(res.skorokhod_closed_form_terminal - kFxSkClosed) < 1e-12);
  for (const auto& run : res.runs)
    for (double w : run.path.wealth) CHECK(w > 0.0);

  // re-running is bit-identical
  const BacktestResult again = backtest(s, est, kMenu);
  for (std::size_t i = 0; i < res.runs.size(); ++i)
    CHECK(again.runs[i].path.wealth == res.runs[i].path.wealth);
}

TEST_CASE("backtest is invariant under uniform price rescaling") {
  const PriceSeries s = load_csv("data/fixture_two_step.csv");
  PriceSeries scaled = s;
  for (auto& rec : scaled.records) rec.price *= 3.7;
  const auto est = estimate_params(s, std::nullopt, 2);
  const auto est_scaled = estimate_params(scaled, std::nullopt, 2);
  const auto a = backtest(s, est, kMenu);
  const auto b = backtest(scaled, est_scaled, kMenu);
  for (std::size_t i = 0; i < a.runs.size(); ++i)
    for (std::size_t k = 0; k < a.runs[i].path.wealth.size(); ++k)
      CHECK(a.runs[i].path.wealth[k] ==
            doctest::Approx(b.runs[i].path.wealth[k]).epsilon(1e-12));
}

TEST_CASE("backtest input validation") {
  const PriceSeries s = load_csv("data/fixture_two_step.csv");
  EstimatedParams est = estimate_params(s, std::nullopt, 2);
  est.params.T = 10.0;  // horizon beyond the series
  CHECK_THROWS_AS(backtest(s, est, kMenu), DataError);

  const auto flat = series_from("2019-03-01,100\n2019-03-04,100\n2019-03-05,100\n");
  CHECK_THROWS_AS(backtest(flat, estimate_params(flat, 0.0, 2), kMenu), DataError);
}

TEST_CASE("one-step backtest with mu <= r parks everything at the short rate") {
  // estimation sees all three prices (sigma > 0), the run covers one step
  const auto s = series_from(
      "2019-03-01,100,0.002\n2019-03-04,99,0.002\n2019-03-05,100,0.002\n");
  const EstimatedParams est = estimate_params(s, std::nullopt, 1);
  REQUIRE(est.params.mu <= est.params.r);
  REQUIRE(est.params.sigma > 0.0);
  const BacktestResult res = backtest(s, est, {StrategyKind::Honest});
  CHECK(res.runs[0].path.pi[0] == 0.0);
  CHECK(res.runs[0].path.wealth[1] ==
        doctest::Approx(std::exp(0.002)).epsilon(1e-15));
}

TEST_CASE("rolling re-estimation option runs") {
  const PriceSeries s = load_csv("data/demo_prices.csv");
  const auto est = estimate_params(s, std::nullopt, 20);
  BacktestOptions opts;
  opts.rolling_window = 10;
  const auto res = backtest(s, est, kMenu, opts);
  for (const auto& run : res.runs) {
    CHECK(run.path.wealth.size() == 21);
    for (double w : run.path.wealth) CHECK(w > 0.0);
  }
}
