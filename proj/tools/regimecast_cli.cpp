// regimecast command-line driver. Every subcommand writes one CSV report to
// --out (stdout when omitted).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"

namespace {

using regimecast::Errc;
using regimecast::Error;
using regimecast::MonthDate;

regimecast::Window parse_window(const std::string& text) {
  const auto sep = text.find_first_of(":,");
  if (sep == std::string::npos) throw Error(Errc::InvalidArgument, "window must be FROM:TO, got '" + text + "'");
  const MonthDate a = MonthDate::parse(text.substr(0, sep));
  const MonthDate b = MonthDate::parse(text.substr(sep + 1));
  if (b < a) throw Error(Errc::InvalidArgument, "window ends before it starts");
  return {a, b};
}

struct RawFlags {
  std::string origin, window, ref_origin, break_date, likelihood = "conditional", estimation_start, spec;
};

void apply(const RawFlags& raw, regimecast::cli::RunConfig& cfg) {
  if (!raw.origin.empty()) cfg.origin = MonthDate::parse(raw.origin);
  if (!raw.window.empty()) cfg.window = parse_window(raw.window);
  if (!raw.ref_origin.empty()) cfg.ref_origin = MonthDate::parse(raw.ref_origin);
  if (!raw.break_date.empty()) cfg.break_date = MonthDate::parse(raw.break_date);
  if (!raw.estimation_start.empty()) cfg.estimation_start = MonthDate::parse(raw.estimation_start);
  if (raw.likelihood == "exact")
    cfg.likelihood = regimecast::Likelihood::exact;
  else if (raw.likelihood == "conditional" || raw.likelihood == "css")
    cfg.likelihood = regimecast::Likelihood::conditional;
  else
    throw Error(Errc::InvalidArgument, "likelihood must be exact or conditional");
  if (!raw.spec.empty()) {
    int p = 0, q = 0;
    char comma = 0;
    std::istringstream in(raw.spec);
    if (!(in >> p >> comma >> q) || comma != ',' || p < 0 || q < 0 || p + q == 0)
      throw Error(Errc::InvalidArgument, "spec must be P,Q");
    cfg.spec = {p, q};
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = regimecast::cli;
  CLI::App app{"Regime-aware inflation forecasting"};
  app.set_config("--config", "", "key=value configuration file (flags override it)");
  app.require_subcommand(1);
  app.fallthrough();

  cli::RunConfig cfg;
  RawFlags raw;
  std::string out_path = "-";

  app.add_option("--data", cfg.data_path, "vintage CSV")->capture_default_str();
  app.add_option("--realized", cfg.realized_path, "realized-data CSV")->capture_default_str();
  app.add_option("--runs", cfg.runs_path, "persona run records")->capture_default_str();
  app.add_option("--series", cfg.series, "target series id")->capture_default_str();
  app.add_option("--state-series", cfg.state_series, "kernel state series id")->capture_default_str();
  app.add_option("--indices", cfg.index_series, "series ids for the indices harness")->delimiter(',');
  app.add_option("--origin", raw.origin, "forecast origin, e.g. 2020-12");
  app.add_option("--estimation-start", raw.estimation_start, "first month of the estimation sample");
  app.add_option("--horizon", cfg.horizon, "forecast horizon")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--method", cfg.method, "forecast method")
      ->check(CLI::IsMember(cli::method_names()))
      ->capture_default_str();
  app.add_option("--spec", raw.spec, "ARMA orders P,Q");
  app.add_option("--likelihood", raw.likelihood, "exact or conditional")->capture_default_str();
  app.add_option("--window", raw.window, "FROM:TO reference window");
  app.add_option("--ref-origin", raw.ref_origin, "intercept-correction reference origin");
  app.add_option("--bandwidth", cfg.bandwidth, "kernel bandwidth (weighted CV when omitted)");
  app.add_option("--ess-floor", cfg.ess_floor, "minimum effective sample size")->capture_default_str();
  app.add_option("--break-date", raw.break_date, "TVP break date");
  app.add_option("--q-scale", cfg.q_scale, "TVP state noise scale")->capture_default_str();
  app.add_option("--gain", cfg.gain_const, "learning gain constant")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--reps", cfg.reps, "Monte-Carlo replications")->capture_default_str();
  app.add_option("--out", out_path, "output CSV path, - for stdout")->capture_default_str();

  bool on_window = false;
  auto* estimate = app.add_subcommand("estimate", "fit the base model and report parameters");
  estimate->add_flag("--on-window", on_window, "fit on --window instead of the full sample");
  auto* forecast = app.add_subcommand("forecast", "fixed-origin forecast path");
  std::string sweep_kind;
  auto* sweep = app.add_subcommand("sweep", "sensitivity grids");
  sweep->add_option("kind", sweep_kind, "sim_window, ic_origin, bandwidth or base_model")
      ->required()
      ->check(CLI::IsMember({"sim_window", "ic_origin", "bandwidth", "base_model"}));
  auto* replay = app.add_subcommand("replay-1979", "forecast 1979 from a December-1978 origin");
  auto* indices = app.add_subcommand("indices", "all methods on each price index");
  auto* bias = app.add_subcommand("simulate-bias", "Monte-Carlo regime-mixture bias report");
  auto* gap = app.add_subcommand("persona-gap", "persona forecast gaps and learning benchmarks");
  auto* text = app.add_subcommand("textstats", "dictionary indicators of persona texts");
  for (auto* sub : {estimate, forecast, sweep, replay, indices, bias, gap, text}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "regimecast: " << e.get_name() << ": " << e.what() << " (see --help)\n";
    return 1;
  }

  try {
    apply(raw, cfg);
    std::ostringstream os;
    if (*estimate) cli::cmd_estimate(cfg, on_window, os);
    if (*forecast) cli::cmd_forecast(cfg, os);
    if (*sweep) cli::cmd_sweep(cfg, sweep_kind, os);
    if (*replay) cli::cmd_replay_1979(cfg, os);
    if (*indices) cli::cmd_indices(cfg, os);
    if (*bias) cli::cmd_simulate_bias(cfg, os);
    if (*gap) cli::cmd_persona_gap(cfg, os);
    if (*text) cli::cmd_textstats(cfg, os);

    const std::string body = os.str();
    if (body.empty()) throw Error(Errc::Io, "empty report");
    if (out_path == "-") {
      std::cout << body;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!(f << body)) throw Error(Errc::Io, "cannot write " + out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "regimecast: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
