#include "cli_commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>

#include "ilab/kernels.hpp"
#include "ilab/market_data.hpp"
#include "ilab/multiasset.hpp"
#include "ilab/valuation.hpp"
#include "ilab/wealth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ilab::cli {

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Per-command option structs. Serialized into the run manifest, and a
// manifest round-trips back into the same struct for `rerun`.

struct BridgeOpts {
  double b = 0.0, T = 1.0;
  std::size_t steps = 64, paths = 10;
  std::uint64_t seed = 1;
  std::string out = "bridge.csv";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BridgeOpts, b, T, steps, paths, seed, out)

struct ValueCurveOpts {
  double mu = 0.03, r = 0.02, sigma = 0.30, T = 1.0;
  double bmin = 0.0, bmax = 0.0;
  std::size_t n = 101;
  bool default_band = true;  // [-theta T, -theta T + sigma T] when b range unset
  std::string out = "value_curve.csv";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ValueCurveOpts, mu, r, sigma, T, bmin, bmax,
                                   n, default_band, out)

struct HistogramOpts {
  double e = 0.0, var = 64.0;
  std::size_t draws = 5000;
  double mu = 0.03, rf = 0.0027, sigma = 0.30, T = 64.0;
  std::size_t steps = 64;
  std::uint64_t seed = 1;
  std::string out = "histogram.csv";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(HistogramOpts, e, var, draws, mu, rf, sigma,
                                   T, steps, seed, out)

struct WeightedValueOpts {
  double mu = 0.03, r = 0.02, sigma = 0.30, T = 1.0;
  std::size_t n = 401;
  std::string out = "weighted_value.csv";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(WeightedValueOpts, mu, r, sigma, T, n, out)

struct McOpts {
  std::string strategy = "honest";
  double mu = 0.03, r = 0.02, sigma = 0.30, T = 1.0, b = 0.0;
  std::size_t steps = 256, paths = 100000;
  std::uint64_t seed = 1;
  double eps = 0.0;  // > 0: stop the adapted strategy at T - eps
  std::string constraint = "no-short";
  unsigned threads = 0;
  std::string out = "mc.json";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(McOpts, strategy, mu, r, sigma, T, b, steps,
                                   paths, seed, eps, constraint, threads, out)

struct BacktestOpts {
  std::string csv;
  std::size_t horizon = 0;  // 0: use the whole series
  std::string sigma_window = "per-step";
  double r = 0.0;
  bool r_given = false;  // false: use the CSV rate column
  std::size_t rolling = 0;
  std::string out = "backtest";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BacktestOpts, csv, horizon, sigma_window, r,
                                   r_given, rolling, out)

struct MapoOpts {
  std::string params_json;
  std::string scheme = "bridge-or-forward";
  std::string out = "mapo.json";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MapoOpts, params_json, scheme, out)

// ---------------------------------------------------------------------------

fs::path resolve(const fs::path& outdir, const std::string& name) {
  fs::path p(name);
  return p.is_absolute() ? p : outdir / p;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw DataError("cannot open output file " + p.string());
  return os;
}

void write_manifest(const fs::path& primary_out, const std::string& command,
                    const json& params, std::uint64_t master_seed,
                    const std::vector<std::string>& outputs) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["tool"] = "insiderlab";
  m["tool_version"] = kToolVersion;
  m["command"] = command;
  m["params"] = params;
  m["master_seed"] = master_seed;
  m["outputs"] = outputs;
  fs::path mp = primary_out;
  mp += ".manifest.json";
  open_out(mp) << m.dump(2) << '\n';
}

json market_json(const MarketParams& p) {
  return json{{"mu", p.mu}, {"r", p.r}, {"sigma", p.sigma}, {"T", p.T}};
}

// ---------------------------------------------------------------------------

int run_bridge(const BridgeOpts& o, const fs::path& outdir) {
  const TimeGrid grid(o.T, o.steps);
  const BridgeSpec spec{o.b, o.T};
  const fs::path out = resolve(outdir, o.out);
  auto os = open_out(out);
  os << "path,t,value\n";
  for (std::size_t p = 0; p < o.paths; ++p) {
    const SamplePath bp = sample_bridge_sequential(
        spec, grid, {o.seed, stream_id(kStreamPaths, p)});
    for (std::size_t k = 0; k <= grid.n_steps; ++k)
      os << p << ',' << format_full(grid.t(k)) << ','
         << format_full(bp.values[k]) << '\n';
  }
  write_manifest(out, "bridge", json(o), o.seed, {o.out});
  return 0;
}

int run_value_curve(ValueCurveOpts o, const fs::path& outdir) {
  const MarketParams p{o.mu, o.r, o.sigma, o.T};
  require_positive_sigma(p);
  if (o.default_band) {
    o.bmin = -p.theta() * p.T;
    o.bmax = o.bmin + p.sigma * p.T;
  }
  if (!(o.bmin < o.bmax))
    throw CLI::ValidationError("value-curve", "--bmin must be below --bmax");
  if (o.n < 2) throw CLI::ValidationError("value-curve", "--n must be >= 2");
  std::vector<double> grid(o.n);
  for (std::size_t i = 0; i < o.n; ++i)
    grid[i] = o.bmin + (o.bmax - o.bmin) * double(i) / double(o.n - 1);
  const auto rows = value_curve(p, grid);
  const fs::path out = resolve(outdir, o.out);
  auto os = open_out(out);
  write_value_curve_csv(os, rows);
  write_manifest(out, "value-curve", json(o), 0, {o.out});
  return 0;
}

int run_histogram(const HistogramOpts& o, const fs::path& outdir) {
  const MarketParams p{o.mu, o.rf, o.sigma, o.T};
  require_positive_sigma(p);
  const SignalDistribution dist{o.e, o.var};
  validate(dist);
  if (o.draws < 1)
    throw CLI::ValidationError("histogram", "--draws must be >= 1");
  const TimeGrid grid(o.T, o.steps);

  std::vector<double> z(o.draws);
  kern::fill_gauss(o.seed, stream_id(kStreamSignalDraws, 0), 0, z.data(),
                   z.size());
  const double sd = std::sqrt(o.var);

  const fs::path out = resolve(outdir, o.out);
  auto os = open_out(out);
  os << "b,v_forward,v_skorokhod,logx_forward,logx_skorokhod\n";
  std::vector<double> v_fw(o.draws), v_sk(o.draws), lx_fw(o.draws),
      lx_sk(o.draws);
  const StrategySpec fw{StrategyKind::ForwardDeterministic, Constraint::NoShort};
  const StrategySpec sk{StrategyKind::SkorokhodInsider, Constraint::NoShort};
  for (std::size_t i = 0; i < o.draws; ++i) {
    const double b = o.e + sd * z[i];
    v_fw[i] = value_forward_noshort(p, b).total;
    v_sk[i] = value_skorokhod(p, b).total;
    // realized wealth along one simulated bridge path, common discrete update
    const SamplePath bridge = sample_bridge_sequential(
        {b, o.T}, grid, {o.seed, stream_id(kStreamPaths, i)});
    const SamplePath stock = stock_from_driving(100.0, p, bridge);
    lx_fw[i] = std::log(simulate_wealth(stock, fw, p, b).wealth.back());
    lx_sk[i] = std::log(simulate_wealth(stock, sk, p, b).wealth.back());
    os << format_full(b) << ',' << format_full(v_fw[i]) << ','
       << format_full(v_sk[i]) << ',' << format_full(lx_fw[i]) << ','
       << format_full(lx_sk[i]) << '\n';
  }
  os.close();

  const auto mv_fw = mean_and_variance(v_fw);
  const auto mv_sk = mean_and_variance(v_sk);
  const auto mr_fw = mean_and_variance(lx_fw);
  const auto mr_sk = mean_and_variance(lx_sk);
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["params"] = market_json(p);
  summary["signal"] = {{"mean", o.e}, {"variance", o.var}};
  summary["draws"] = o.draws;
  summary["value_forward"] = {{"mean", mv_fw.mean}, {"variance", mv_fw.variance}};
  summary["value_skorokhod"] = {{"mean", mv_sk.mean}, {"variance", mv_sk.variance}};
  summary["realized_forward"] = {{"mean", mr_fw.mean}, {"variance", mr_fw.variance}};
  summary["realized_skorokhod"] = {{"mean", mr_sk.mean}, {"variance", mr_sk.variance}};
  fs::path sp = out;
  sp += ".summary.json";
  open_out(sp) << summary.dump(2) << '\n';
  write_manifest(out, "histogram", json(o), o.seed,
                 {o.out, o.out + ".summary.json"});
  return 0;
}

int run_weighted_value(const WeightedValueOpts& o, const fs::path& outdir) {
  const MarketParams p{o.mu, o.r, o.sigma, o.T};
  require_positive_sigma(p);
  if (o.n < 2)
    throw CLI::ValidationError("weighted-value", "--n must be >= 2");
  const SignalDistribution dist{0.0, 1.0};  // b ~ N(0,1)
  const fs::path out = resolve(outdir, o.out);
  auto os = open_out(out);
  os << "b,fw_weighted,sk_weighted\n";
  for (std::size_t i = 0; i < o.n; ++i) {
    const double b = -5.0 + 10.0 * double(i) / double(o.n - 1);
    const double w = normal_pdf(b, 0.0, 1.0);
    os << format_full(b) << ','
       << format_full(value_forward_noshort(p, b).total * w) << ','
       << format_full(value_skorokhod(p, b).total * w) << '\n';
  }
  os.close();

  const double sk_closed = unconditional_skorokhod(p, dist);
  const double sk_quad = unconditional_skorokhod_quadrature(p, dist);
  const double fw_quad = unconditional_forward_quadrature(p, dist);
  const double fw_erf = forward_unconditional_erf_candidate(p);
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["params"] = market_json(p);
  summary["skorokhod_closed_form"] = sk_closed;
  summary["skorokhod_quadrature"] = sk_quad;
  summary["forward_quadrature"] = fw_quad;
  summary["forward_erf_candidate"] = fw_erf;
  summary["forward_erf_candidate_minus_quadrature"] = fw_erf - fw_quad;
  fs::path sp = out;
  sp += ".summary.json";
  open_out(sp) << summary.dump(2) << '\n';
  write_manifest(out, "weighted-value", json(o), 0,
                 {o.out, o.out + ".summary.json"});
  return 0;
}

int run_mc(const McOpts& o, const fs::path& outdir) {
  const MarketParams p{o.mu, o.r, o.sigma, o.T};
  validate(p);
  StrategySpec spec;
  spec.kind = strategy_from_name(o.strategy);
  if (o.constraint == "no-short")
    spec.constraint = Constraint::NoShort;
  else if (o.constraint == "allow-short")
    spec.constraint = Constraint::AllowShort;
  else
    throw CLI::ValidationError("mc", "--constraint must be no-short or allow-short");
  validate(spec);

  const MCConfig cfg{o.paths, o.seed, TimeGrid(o.T, o.steps)};
  std::size_t stop_index = kFullHorizon;
  double eps_effective = 0.0;
  if (o.eps > 0.0) {
    if (!(o.eps < o.T))
      throw CLI::ValidationError("mc", "--eps must lie in (0, T)");
    stop_index =
        std::size_t(std::llround((o.T - o.eps) / o.T * double(o.steps)));
    stop_index = std::min(stop_index, o.steps);
    eps_effective = o.T - cfg.grid.t(stop_index);
  }
  const MCEstimate est =
      mc_expected_log_utility(spec, p, o.b, cfg, stop_index, o.threads);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["strategy"] = o.strategy;
  j["constraint"] = o.constraint;
  j["params"] = market_json(p);
  j["b"] = o.b;
  j["steps"] = o.steps;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["n_paths"] = est.n_paths;
  if (o.eps > 0.0) j["eps_effective"] = eps_effective;
  if (spec.kind == StrategyKind::SkorokhodInsider) {
    const double pi = skorokhod_pi(p, o.b, Constraint::NoShort);
    // Theoretical anticipating-solution wealth; the MC mean above applies the
    // common discrete update to the same indicator portfolio.
    j["skorokhod_closed_form_log_wealth"] =
        std::log(skorokhod_terminal_wealth(p, o.b, pi));
    j["skorokhod_value"] = value_skorokhod(p, o.b).total;
  }
  const fs::path out = resolve(outdir, o.out);
  open_out(out) << j.dump(2) << '\n';
  write_manifest(out, "mc", json(o), o.seed, {o.out});
  return 0;
}

int run_backtest(const BacktestOpts& o, const fs::path& outdir) {
  if (o.csv.empty()) throw CLI::ValidationError("backtest", "--csv is required");
  const PriceSeries series = load_csv(o.csv);
  const std::size_t horizon =
      o.horizon > 0 ? o.horizon : series.records.size() - 1;
  const SigmaWindow window = o.sigma_window == "monthly" ? SigmaWindow::Monthly
                                                         : SigmaWindow::PerStep;
  std::optional<double> r_const;
  if (o.r_given) r_const = o.r;
  const EstimatedParams est = estimate_params(series, r_const, horizon, window);
  const std::vector<StrategyKind> menu{StrategyKind::Honest,
                                       StrategyKind::ForwardDeterministic,
                                       StrategyKind::SkorokhodInsider};
  BacktestOptions bo;
  bo.rolling_window = o.rolling;
  const BacktestResult res = backtest(series, est, menu, bo);

  std::vector<std::string> outputs;
  const fs::path stem = resolve(outdir, o.out);
  for (const auto& run : res.runs) {
    fs::path f = stem;
    f += std::string("_") + strategy_name(run.kind) + ".csv";
    auto os = open_out(f);
    os << "date,wealth,pi\n";
    const auto& wp = run.path;
    for (std::size_t k = 0; k < wp.wealth.size(); ++k) {
      const double pi = wp.pi.empty() ? 0.0 : wp.pi[k < wp.pi.size() ? k : wp.pi.size() - 1];
      os << res.dates[k] << ',' << format_full(wp.wealth[k]) << ','
         << format_full(pi) << '\n';
    }
    outputs.push_back(f.filename().string());
  }

  json j;
  j["schema_version"] = kSchemaVersion;
  j["implied_b"] = res.implied_b;
  j["params"] = market_json(res.params.params);
  j["sample_size"] = res.params.sample_size;
  j["period_convention"] = res.params.period_convention;
  j["skorokhod_closed_form_terminal"] = res.skorokhod_closed_form_terminal;
  for (const auto& run : res.runs)
    j["terminal_wealth"][strategy_name(run.kind)] = run.path.wealth.back();
  fs::path sj = stem;
  sj += "_summary.json";
  open_out(sj) << j.dump(2) << '\n';
  outputs.push_back(sj.filename().string());

  fs::path manifest_anchor = stem;
  manifest_anchor += "_summary.json";
  write_manifest(manifest_anchor, "backtest", json(o), 0, outputs);
  return 0;
}

int run_mapo(const MapoOpts& o, const fs::path& outdir) {
  if (o.params_json.empty())
    throw CLI::ValidationError("mapo", "--params-json is required");
  std::ifstream in(o.params_json);
  if (!in) throw DataError("cannot open " + o.params_json);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const MultiAssetParams m = mapo_params_from_json_text(text);

  MapoScheme scheme;
  if (o.scheme == "bridge-or-forward")
    scheme = MapoScheme::BridgeOrForward;
  else if (o.scheme == "skorokhod")
    scheme = MapoScheme::Skorokhod;
  else
    throw CLI::ValidationError("mapo",
                               "--scheme must be bridge-or-forward or skorokhod");

  const bool partial =
      !m.mask.empty() &&
      !std::all_of(m.mask.begin(), m.mask.end(), [](bool v) { return v; });

  PortfolioVector pv;
  double value = 0.0;
  if (partial) {
    auto [pvec, val] = mapo_partial_info(m, scheme);
    pv = pvec;
    value = val;
  } else {
    pv = scheme == MapoScheme::BridgeOrForward ? mapo_pi_bridge_or_forward(m)
                                               : mapo_pi_skorokhod(m);
    value = mapo_value(m, scheme);
  }

  const MapoFeasible feasible = scheme == MapoScheme::BridgeOrForward
                                    ? MapoFeasible::Unconstrained
                                    : MapoFeasible::Box;
  const MaximizeResult oracle = numeric_maximize_J(m, scheme, feasible);
  double max_diff = 0.0;
  for (Eigen::Index i = 0; i < m.d(); ++i)
    max_diff = std::max(max_diff, std::abs(pv.pi(i) - oracle.pi(i)));

  json j;
  j["schema_version"] = kSchemaVersion;
  j["scheme"] = o.scheme;
  j["partial_information"] = partial;
  j["condition_number"] = condition_number(m.sigma);
  j["pi"] = std::vector<double>(pv.pi.data(), pv.pi.data() + pv.pi.size());
  j["value"] = value;
  j["box_violation"] = pv.box_violation;
  j["budget_violation"] = pv.simplex_violation;
  j["oracle"] = {
      {"pi", std::vector<double>(oracle.pi.data(), oracle.pi.data() + oracle.pi.size())},
      {"residual", oracle.residual},
      {"iterations", oracle.iterations},
      {"max_component_diff", max_diff}};
  const fs::path out = resolve(outdir, o.out);
  open_out(out) << j.dump(2) << '\n';
  write_manifest(out, "mapo", json(o), 0, {o.out});
  return 0;
}

int run_rerun(const std::string& manifest_path, const fs::path& outdir) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("manifest parse error: ") + e.what());
  }
  const std::string cmd = m.at("command").get<std::string>();
  const json params = m.at("params");
  if (cmd == "bridge") return run_bridge(params.get<BridgeOpts>(), outdir);
  if (cmd == "value-curve")
    return run_value_curve(params.get<ValueCurveOpts>(), outdir);
  if (cmd == "histogram")
    return run_histogram(params.get<HistogramOpts>(), outdir);
  if (cmd == "weighted-value")
    return run_weighted_value(params.get<WeightedValueOpts>(), outdir);
  if (cmd == "mc") return run_mc(params.get<McOpts>(), outdir);
  if (cmd == "backtest") return run_backtest(params.get<BacktestOpts>(), outdir);
  if (cmd == "mapo") return run_mapo(params.get<MapoOpts>(), outdir);
  throw DataError("manifest names unknown command '" + cmd + "'");
}

}  // namespace

int run_args(std::vector<std::string> args) {
  CLI::App app{"insiderlab - anticipating-calculus portfolio laboratory",
               "insiderlab"};
  app.set_version_flag("--version", std::string("insiderlab ") + kToolVersion);
  app.set_config("--config", "", "Read options from a TOML-style config file");
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string outdir_s = ".";
  app.add_option("--outdir", outdir_s,
                 "Directory for relative output paths")
      ->envname("ILAB_OUTDIR");

  BridgeOpts bo;
  auto* cb = app.add_subcommand("bridge", "Sample pinned bridge paths to CSV");
  cb->add_option("--b", bo.b, "Terminal value");
  cb->add_option("--T", bo.T, "Horizon");
  cb->add_option("--steps", bo.steps, "Grid steps");
  cb->add_option("--paths", bo.paths, "Number of paths");
  cb->add_option("--seed", bo.seed, "Master seed");
  cb->add_option("--out", bo.out, "Output CSV");

  ValueCurveOpts vo;
  auto* cv = app.add_subcommand(
      "value-curve", "Tabulate honest/forward/Skorokhod values against b");
  cv->add_option("--mu", vo.mu);
  cv->add_option("--r", vo.r);
  cv->add_option("--sigma", vo.sigma);
  cv->add_option("--T", vo.T);
  auto* bmin_opt = cv->add_option("--bmin", vo.bmin, "Band start (default -theta T)");
  cv->add_option("--bmax", vo.bmax, "Band end (default -theta T + sigma T)")
      ->needs(bmin_opt);
  cv->add_option("--n", vo.n, "Grid points");
  cv->add_option("--out", vo.out, "Output CSV");

  HistogramOpts ho;
  auto* ch = app.add_subcommand(
      "histogram", "Distribution of the value of the problem under b ~ N(e, var)");
  ch->add_option("--e", ho.e, "Signal mean");
  ch->add_option("--var", ho.var, "Signal variance");
  ch->add_option("--draws", ho.draws);
  ch->add_option("--mu", ho.mu);
  ch->add_option("--rf,--r", ho.rf, "Risk-free rate");
  ch->add_option("--sigma", ho.sigma);
  ch->add_option("--T", ho.T);
  ch->add_option("--steps", ho.steps, "Steps of each simulated path");
  ch->add_option("--seed", ho.seed);
  ch->add_option("--out", ho.out, "Output CSV");

  WeightedValueOpts wo;
  auto* cw = app.add_subcommand(
      "weighted-value", "Value times density curves and unconditional integrals");
  cw->add_option("--mu", wo.mu);
  cw->add_option("--r", wo.r);
  cw->add_option("--sigma", wo.sigma);
  cw->add_option("--T", wo.T);
  cw->add_option("--n", wo.n, "Grid points");
  cw->add_option("--out", wo.out, "Output CSV");

  McOpts mo;
  auto* cm = app.add_subcommand("mc", "Monte Carlo expected log-utility");
  cm->add_option("--strategy", mo.strategy,
                 "honest|bridge|forward-det|forward-adapted|skorokhod");
  cm->add_option("--mu", mo.mu);
  cm->add_option("--r", mo.r);
  cm->add_option("--sigma", mo.sigma);
  cm->add_option("--T", mo.T);
  cm->add_option("--b", mo.b, "Terminal signal");
  cm->add_option("--steps", mo.steps);
  cm->add_option("--paths", mo.paths);
  cm->add_option("--seed", mo.seed);
  cm->add_option("--eps", mo.eps, "Truncate the adapted strategy at T - eps");
  cm->add_option("--constraint", mo.constraint, "no-short|allow-short");
  cm->add_option("--threads", mo.threads, "0 = hardware default");
  cm->add_option("--out", mo.out, "Output JSON");

  BacktestOpts bko;
  auto* ck = app.add_subcommand("backtest",
                                "Three-portfolio insider backtest on a price CSV");
  ck->add_option("--csv", bko.csv, "Input date,price[,rate] CSV")->required();
  ck->add_option("--horizon", bko.horizon, "Steps (default: whole series)");
  ck->add_option("--sigma-window", bko.sigma_window, "per-step|monthly");
  auto* bk_r = ck->add_option("--r", bko.r, "Constant per-step risk-free rate");
  ck->add_option("--rolling", bko.rolling,
                 "Re-estimate parameters on a trailing window of this length");
  ck->add_option("--out", bko.out, "Output stem");

  MapoOpts mpo;
  auto* cp = app.add_subcommand("mapo", "Multi-asset portfolios and values");
  cp->add_option("--params-json", mpo.params_json, "Parameter JSON file")
      ->required();
  cp->add_option("--scheme", mpo.scheme, "bridge-or-forward|skorokhod");
  cp->add_option("--out", mpo.out, "Output JSON");

  std::string manifest_path;
  auto* cr = app.add_subcommand("rerun", "Re-execute a run manifest");
  cr->add_option("manifest", manifest_path, "Path to a .manifest.json file")
      ->required();

  int code = 0;
  cb->callback([&] { code = run_bridge(bo, outdir_s); });
  cv->callback([&] {
    vo.default_band = !bmin_opt->count();
    code = run_value_curve(vo, outdir_s);
  });
  ch->callback([&] { code = run_histogram(ho, outdir_s); });
  cw->callback([&] { code = run_weighted_value(wo, outdir_s); });
  cm->callback([&] { code = run_mc(mo, outdir_s); });
  ck->callback([&] {
    bko.r_given = bk_r->count() > 0;
    code = run_backtest(bko, outdir_s);
  });
  cp->callback([&] { code = run_mapo(mpo, outdir_s); });
  cr->callback([&] { code = run_rerun(manifest_path, outdir_s); });

  std::reverse(args.begin(), args.end());  // CLI11 consumes args back to front
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(std::size_t(argc));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_args(std::move(args));
}

}  // namespace ilab::cli
