#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "regimecast/adjust.hpp"
#include "regimecast/experience.hpp"
#include "regimecast/kernel.hpp"
#include "regimecast/oracle.hpp"
#include "regimecast/regime.hpp"
#include "regimecast/textmetrics.hpp"

namespace regimecast::cli {

/// Everything a subcommand needs. Defaults reproduce the 2021 exercise on
/// the bundled data.
struct RunConfig {
  std::string data_path = "data/fredmd_2021-01.csv";
  std::string realized_path = "data/realized_2021.csv";
  std::string runs_path = "data/personas/runs.csv";
  std::string series = "CPIAUCSL";
  std::string state_series = "OILBRENT";
  std::vector<std::string> index_series{"PCEPI",      "CPILFESL", "PPIACO",  "WPSFD49207",
                                        "WPSFD49502", "WPSID61",  "WPSID62", "PPICMM"};

  MonthDate estimation_start{1960, 1};
  MonthDate origin{2020, 12};
  int horizon = 12;
  std::string method = "arma";
  ArmaSpec spec{1, 1};
  Likelihood likelihood = Likelihood::conditional;

  Window window{{1973, 1}, {1980, 12}};
  MonthDate ref_origin{1978, 1};
  MonthDate robust_start{1960, 2};
  MonthDate pre_sample_end{1973, 1};

  double bandwidth = std::numeric_limits<double>::quiet_NaN();  ///< NaN selects by weighted CV
  double ess_floor = 30.0;

  MonthDate break_date{2020, 1};
  double q_scale = 0.01;

  double gain_const = 3.044;
  MonthDate career_experienced{1970, 1};
  MonthDate career_young{2005, 1};

  std::uint64_t seed = 0x5eed1960;
  int reps = 500;
  /// Accept unconverged best points instead of failing (sweeps set this).
  bool lenient = false;

  FitOptions fit() const;
};

const std::vector<std::string>& method_names();

// Data access --------------------------------------------------------------

/// Annualized inflation of cfg.series from the vintage file.
Series load_inflation(const RunConfig& cfg, const std::string& series);
/// Estimation sample [max(estimation_start, first month), origin].
Series history_for(const RunConfig& cfg, const Series& y);
/// Realized path after cfg.origin: from the vintage data when it covers the
/// horizon, otherwise from the realized-data file.
std::optional<Eigen::VectorXd> realized_path(const RunConfig& cfg, const std::string& series);
/// Vintage inflation extended with realized months from the realized-data file.
Series spliced_inflation(const RunConfig& cfg, const std::string& series);

// Computations shared by the CLI and the acceptance harness ---------------

struct MethodResult {
  ForecastPath path;
  std::optional<Params> params;
  double bandwidth = std::numeric_limits<double>::quiet_NaN();
  double ess = std::numeric_limits<double>::quiet_NaN();
};

MethodResult run_method(const RunConfig& cfg, const std::string& method, const Series& y);
inline MethodResult run_method(const RunConfig& cfg) {
  return run_method(cfg, cfg.method, load_inflation(cfg, cfg.series));
}

struct EstimateResult {
  ArmaFit fit;
  Window sample;
};
EstimateResult run_estimate(const RunConfig& cfg, bool on_window);

struct WindowCell {
  int start_year, end_year;
  double average;
};
std::vector<WindowCell> sweep_sim_window(const RunConfig& cfg);

struct OriginCell {
  MonthDate origin;
  double average;
};
std::vector<OriginCell> sweep_ic_origin(const RunConfig& cfg);

struct BandwidthCell {
  double bandwidth, ess, average;
};
struct BandwidthSweep {
  std::vector<BandwidthCell> cells;
  double unweighted_average;  ///< unweighted ARMA on the same aligned sample
};
BandwidthSweep sweep_bandwidth(const RunConfig& cfg);

struct BaseModelCell {
  std::string method, model;
  double average;
};
std::vector<BaseModelCell> sweep_base_model(const RunConfig& cfg);

struct Replay1979 {
  ForecastPath unadjusted, similarity, ic, kernel;
  Eigen::VectorXd realized;
  double kernel_bandwidth, kernel_ess;
};
/// Fixed origin 1978M12, similarity on 1973M01-1975M12, IC from origin
/// 1972M12, kernel at cfg.bandwidth (32 when unset).
Replay1979 replay_1979(const RunConfig& cfg);

struct IndexRow {
  std::string series;
  bool available = false;
  std::string note;
  double realized = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> averages;
  std::string best;
};
std::vector<IndexRow> run_indices(const RunConfig& cfg);

struct GapRow {
  PersonaGap gap;
  double mn_experienced, mn_young;
};
std::vector<GapRow> persona_gaps(const RunConfig& cfg);

std::vector<CellIndicators> text_cells(const RunConfig& cfg);

// Subcommands, each writing one CSV report ---------------------------------

void cmd_estimate(const RunConfig& cfg, bool on_window, std::ostream& os);
void cmd_forecast(const RunConfig& cfg, std::ostream& os);
void cmd_sweep(const RunConfig& cfg, const std::string& kind, std::ostream& os);
void cmd_replay_1979(const RunConfig& cfg, std::ostream& os);
void cmd_indices(const RunConfig& cfg, std::ostream& os);
void cmd_simulate_bias(const RunConfig& cfg, std::ostream& os);
void cmd_persona_gap(const RunConfig& cfg, std::ostream& os);
void cmd_textstats(const RunConfig& cfg, std::ostream& os);

}  // namespace regimecast::cli
