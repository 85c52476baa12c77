#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "regimecast/csv.hpp"

namespace regimecast::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kIndexMethods{"arma", "ic", "ic_robust", "similarity", "kernel", "msar", "tvp"};

ForecastPath arma_path(const RunConfig& cfg, const Series& hist, Params* fitted = nullptr) {
  const FitOptions fo = cfg.fit();
  const Params p = fit_mle(hist, cfg.spec, {}, fo);
  if (fitted) *fitted = p;
  return forecast_from_history(p, hist, cfg.horizon, fo.likelihood);
}

std::pair<Series, Series> kernel_sample(const RunConfig& cfg, const Series& hist) {
  const Series z = load_inflation(cfg, cfg.state_series);
  auto [yk, zk] = align(hist, z);
  if (zk.end() != hist.end())
    throw Error(Errc::InsufficientHistory, cfg.state_series + " ends " + zk.end().str() + ", before the origin " +
                                               hist.end().str());
  return {std::move(yk), std::move(zk)};
}

CvOptions cv_options(const RunConfig& cfg) {
  CvOptions cv;
  cv.fit = cfg.fit();
  return cv;
}

std::string spec_label(const ArmaSpec& s) {
  if (s.q == 0) return "AR(" + std::to_string(s.p) + ")";
  return "ARMA(" + std::to_string(s.p) + "," + std::to_string(s.q) + ")";
}

}  // namespace

FitOptions RunConfig::fit() const {
  FitOptions fo;
  fo.seed = seed;
  fo.likelihood = likelihood;
  fo.require_convergence = !lenient;
  return fo;
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"arma", "ic",  "ic_robust",     "similarity", "kernel",
                                              "msar", "tvp", "tvp_recursive", "mn"};
  return names;
}

Series load_inflation(const RunConfig& cfg, const std::string& series) {
  return annualized_log_diff(load_vintage(cfg.data_path, series));
}

Series history_for(const RunConfig& cfg, const Series& y) {
  if (!y.contains(cfg.origin))
    throw Error(Errc::InsufficientHistory, y.name + ": origin " + cfg.origin.str() + " outside " + y.start.str() +
                                               ".." + y.end().str());
  return slice(y, std::max(cfg.estimation_start, y.start), cfg.origin);
}

std::optional<Eigen::VectorXd> realized_path(const RunConfig& cfg, const std::string& series) {
  const MonthDate first = cfg.origin + 1;
  const MonthDate last = cfg.origin + cfg.horizon;
  const Series y = load_inflation(cfg, series);
  if (y.contains(first) && y.contains(last)) return slice(y, first, last).values;
  try {
    const Series r = annualized_log_diff(load_vintage(cfg.realized_path, series));
    if (r.contains(first) && r.contains(last)) return slice(r, first, last).values;
  } catch (const Error& e) {
    if (e.code() != Errc::FileNotFound && e.code() != Errc::SeriesNotFound) throw;
  }
  return std::nullopt;
}

Series spliced_inflation(const RunConfig& cfg, const std::string& series) {
  const Series y = load_inflation(cfg, series);
  const Series r = annualized_log_diff(load_vintage(cfg.realized_path, series));
  if (r.end() <= y.end()) return y;
  return concat(y, slice(r, y.end() + 1, r.end()));
}

MethodResult run_method(const RunConfig& cfg, const std::string& method, const Series& y) {
  const Series hist = history_for(cfg, y);
  const FitOptions fo = cfg.fit();
  const int H = cfg.horizon;
  if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be at least 1");
  MethodResult out;

  if (method == "arma") {
    Params p;
    out.path = arma_path(cfg, hist, &p);
    out.params = p;
  } else if (method == "ic" || method == "ic_robust") {
    const ForecastPath base = arma_path(cfg, hist);
    AdjustOptions ao;
    ao.fit = fo;
    ao.estimation_start = cfg.estimation_start;
    if (method == "ic") {
      out.path = intercept_correction(base, y, cfg.ref_origin, cfg.spec, ao);
    } else {
      ao.estimation_start = cfg.robust_start;
      out.path = robust_intercept_correction(base, y, cfg.window, cfg.pre_sample_end, cfg.spec, ao);
    }
  } else if (method == "similarity") {
    Params p;
    out.path = similarity_forecast(y, cfg.window, cfg.spec, hist, H, fo, &p);
    out.params = p;
  } else if (method == "kernel") {
    const auto [yk, zk] = kernel_sample(cfg, hist);
    double b = cfg.bandwidth;
    if (std::isnan(b)) {
      b = select_bandwidth(yk.values, zk.values, zk.values(zk.size() - 1), bandwidth_grid(zk.values), cfg.ess_floor,
                           cfg.spec, cv_options(cfg));
    }
    const KernelForecast kf = kernel_forecast(yk, zk, b, hist, H, cfg.spec, fo);
    out.path = kf.path;
    out.params = kf.params;
    out.bandwidth = b;
    out.ess = kf.weights.ess;
  } else if (method == "msar") {
    const MsArFit f = fit_msar(hist);
    out.path = forecast_msar(f.params, f.filtered_T, hist.values(hist.size() - 1), H, hist.end());
  } else if (method == "tvp") {
    out.path = fit_forecast_tvp(hist, cfg.break_date, cfg.q_scale, H);
  } else if (method == "tvp_recursive") {
    const Series ext = spliced_inflation(cfg, y.name);
    if (!ext.contains(cfg.origin + H))
      throw Error(Errc::InsufficientHistory, "realized data do not cover the forecast horizon");
    out.path = tvp_recursive_one_step(slice(ext, hist.start, cfg.origin + H), cfg.origin, cfg.break_date,
                                      cfg.q_scale);
  } else if (method == "mn") {
    const Belief b = mn_learn(y, cfg.career_experienced, cfg.origin, cfg.gain_const);
    out.path = mn_forecast(b, y.at(cfg.origin), H, cfg.origin);
  } else {
    throw Error(Errc::InvalidArgument, "unknown method '" + method + "'");
  }
  return out;
}

EstimateResult run_estimate(const RunConfig& cfg, bool on_window) {
  const Series y = load_inflation(cfg, cfg.series);
  const Series hist = history_for(cfg, y);
  const Window sample = on_window ? cfg.window : Window{hist.start, hist.end()};
  const Series s = slice(y, sample.first, sample.second);
  return {fit_mle_detailed(s.values, cfg.spec, {}, cfg.fit()), sample};
}

std::vector<WindowCell> sweep_sim_window(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.lenient = true;
  const Series y = load_inflation(c, c.series);
  const Series hist = history_for(c, y);
  std::vector<WindowCell> out;
  for (int s = 1970; s <= 1977; ++s)
    for (int e = 1978; e <= 1984; ++e) {
      double avg = kNaN;
      try {
        avg = similarity_forecast(y, {{s, 1}, {e, 12}}, c.spec, hist, c.horizon, c.fit()).average();
      } catch (const Error& err) {
        if (err.code() != Errc::TooShort) throw;
      }
      out.push_back({s, e, avg});
    }
  return out;
}

std::vector<OriginCell> sweep_ic_origin(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.lenient = true;
  const Series y = load_inflation(cfg, cfg.series);
  const Series hist = history_for(cfg, y);
  const ForecastPath base = arma_path(cfg, hist);
  AdjustOptions ao;
  ao.fit = cfg.fit();
  ao.estimation_start = cfg.estimation_start;
  std::vector<OriginCell> out;
  for (MonthDate tau{1973, 1}; tau <= MonthDate{1980, 12}; ++tau)
    out.push_back({tau, intercept_correction(base, y, tau, cfg.spec, ao).average()});
  return out;
}

BandwidthSweep sweep_bandwidth(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.lenient = true;
  const Series y = load_inflation(cfg, cfg.series);
  const Series hist = history_for(cfg, y);
  const auto [yk, zk] = kernel_sample(cfg, hist);
  FitOptions fo = cfg.fit();
  BandwidthSweep out;
  Params prev;
  bool have_prev = false;
  for (double b : bandwidth_grid(zk.values)) {
    try {
      fo.warm_start = have_prev ? &prev : nullptr;
      const KernelForecast kf = kernel_forecast(yk, zk, b, hist, cfg.horizon, cfg.spec, fo);
      out.cells.push_back({b, kf.weights.ess, kf.path.average()});
      prev = kf.params;
      have_prev = true;
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroMass) throw;
      out.cells.push_back({b, 0.0, kNaN});
    }
  }
  const Params p = fit_mle(yk, cfg.spec, {}, cfg.fit());
  out.unweighted_average = forecast_from_history(p, hist, cfg.horizon, cfg.likelihood).average();
  return out;
}

std::vector<BaseModelCell> sweep_base_model(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.lenient = true;
  const Series y = load_inflation(cfg, cfg.series);
  const std::vector<std::pair<std::string, std::string>> methods{
      {"unadjusted", "arma"}, {"ic", "ic"}, {"ic_robust", "ic_robust"}, {"similarity", "similarity"}};
  const std::vector<ArmaSpec> models{{1, 1}, {1, 0}, {4, 0}, {2, 1}};
  std::vector<BaseModelCell> out;
  for (const auto& [label, method] : methods)
    for (const ArmaSpec& m : models) {
      RunConfig c = cfg;
      c.spec = m;
      out.push_back({label, spec_label(m), run_method(c, method, y).path.average()});
    }
  return out;
}

Replay1979 replay_1979(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.origin = {1978, 12};
  c.window = {{1973, 1}, {1975, 12}};
  c.ref_origin = {1972, 12};
  if (std::isnan(c.bandwidth)) c.bandwidth = 32.0;
  const Series y = load_inflation(c, c.series);
  Replay1979 out;
  out.unadjusted = run_method(c, "arma", y).path;
  out.similarity = run_method(c, "similarity", y).path;
  out.ic = run_method(c, "ic", y).path;
  const MethodResult k = run_method(c, "kernel", y);
  out.kernel = k.path;
  out.kernel_bandwidth = k.bandwidth;
  out.kernel_ess = k.ess;
  out.realized = slice(y, MonthDate{1979, 1}, MonthDate{1979, 12}).values;
  return out;
}

std::vector<IndexRow> run_indices(const RunConfig& cfg) {
  std::vector<IndexRow> rows;
  for (const auto& id : cfg.index_series) {
    IndexRow row;
    row.series = id;
    RunConfig c = cfg;
    c.series = id;
    c.estimation_start = cfg.robust_start;
    Series y;
    try {
      y = load_inflation(c, id);
    } catch (const Error& e) {
      if (e.code() != Errc::SeriesNotFound) throw;
      row.note = "not in data file";
      rows.push_back(row);
      continue;
    }
    const auto realized = realized_path(c, id);
    if (!realized) {
      row.note = "no realized data";
      rows.push_back(row);
      continue;
    }
    row.available = true;
    row.realized = realized->mean();
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& m : kIndexMethods) {
      double avg = kNaN;
      try {
        avg = run_method(c, m, y).path.average();
      } catch (const Error& e) {
        row.note += (row.note.empty() ? "" : "; ") + m + ": " + e.what();
      }
      row.averages.emplace_back(m, avg);
      if (std::isfinite(avg) && std::abs(avg - row.realized) < best_gap) {
        best_gap = std::abs(avg - row.realized);
        row.best = m;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<GapRow> persona_gaps(const RunConfig& cfg) {
  const auto runs = load_runs(cfg.runs_path);
  const Series y = spliced_inflation(cfg, cfg.series);
  std::vector<GapRow> out;
  for (const MonthDate v : vintages(runs)) {
    GapRow row{persona_gap(runs, v), 0.0, 0.0};
    row.mn_experienced = mn_vintage_average(y, cfg.career_experienced, v, v.year, cfg.gain_const);
    row.mn_young = mn_vintage_average(y, cfg.career_young, v, v.year, cfg.gain_const);
    out.push_back(row);
  }
  return out;
}

std::vector<CellIndicators> text_cells(const RunConfig& cfg) {
  const auto runs = load_runs(cfg.runs_path);
  const auto dir = std::filesystem::path(cfg.runs_path).parent_path().string();
  return aggregate_cells(score_runs(runs, dir));
}

void cmd_estimate(const RunConfig& cfg, bool on_window, std::ostream& os) {
  const EstimateResult r = run_estimate(cfg, on_window);
  const Params& p = r.fit.params;
  os << "parameter,value\n";
  os << "sample_start," << r.sample.first.str() << '\n';
  os << "sample_end," << r.sample.second.str() << '\n';
  os << "alpha," << fmt_num(p.alpha) << '\n';
  for (Eigen::Index i = 0; i < p.phi.size(); ++i) os << "phi" << i + 1 << ',' << fmt_num(p.phi(i)) << '\n';
  for (Eigen::Index j = 0; j < p.theta.size(); ++j) os << "theta" << j + 1 << ',' << fmt_num(p.theta(j)) << '\n';
  os << "sigma2," << fmt_num(p.sigma2) << '\n';
  os << "mean," << fmt_num(p.mean()) << '\n';
  os << "loglik," << fmt_num(r.fit.loglik) << '\n';
  os << "grad_norm," << fmt_num(r.fit.grad_norm) << '\n';
  os << "converged," << (r.fit.converged ? 1 : 0) << '\n';
}

void cmd_forecast(const RunConfig& cfg, std::ostream& os) { write_forecast_csv(os, run_method(cfg).path); }

void cmd_sweep(const RunConfig& cfg, const std::string& kind, std::ostream& os) {
  if (kind == "sim_window") {
    os << "start_year,end_year,average\n";
    for (const auto& c : sweep_sim_window(cfg))
      os << c.start_year << ',' << c.end_year << ',' << fmt_num(c.average) << '\n';
  } else if (kind == "ic_origin") {
    os << "origin,average\n";
    for (const auto& c : sweep_ic_origin(cfg)) os << c.origin.str() << ',' << fmt_num(c.average) << '\n';
  } else if (kind == "bandwidth") {
    const BandwidthSweep s = sweep_bandwidth(cfg);
    os << "bandwidth,ess,average\n";
    for (const auto& c : s.cells) os << fmt_num(c.bandwidth) << ',' << fmt_num(c.ess) << ',' << fmt_num(c.average) << '\n';
    os << "inf,," << fmt_num(s.unweighted_average) << '\n';
  } else if (kind == "base_model") {
    const auto cells = sweep_base_model(cfg);
    os << "method,arma11,ar1,ar4,arma21\n";
    for (std::size_t i = 0; i < cells.size(); i += 4) {
      os << cells[i].method;
      for (std::size_t k = i; k < i + 4; ++k) os << ',' << fmt_num(cells[k].average);
      os << '\n';
    }
  } else {
    throw Error(Errc::InvalidArgument, "unknown sweep '" + kind + "'");
  }
}

void cmd_replay_1979(const RunConfig& cfg, std::ostream& os) {
  const Replay1979 r = replay_1979(cfg);
  os << "date,realized,unadjusted,similarity,ic,kernel\n";
  for (int h = 1; h <= r.unadjusted.horizon(); ++h)
    os << r.unadjusted.date(h).str() << ',' << fmt_num(r.realized(h - 1)) << ',' << fmt_num(r.unadjusted.values(h - 1))
       << ',' << fmt_num(r.similarity.values(h - 1)) << ',' << fmt_num(r.ic.values(h - 1)) << ','
       << fmt_num(r.kernel.values(h - 1)) << '\n';
  os << "average," << fmt_num(r.realized.mean()) << ',' << fmt_num(r.unadjusted.average()) << ','
     << fmt_num(r.similarity.average()) << ',' << fmt_num(r.ic.average()) << ',' << fmt_num(r.kernel.average()) << '\n';
}

void cmd_indices(const RunConfig& cfg, std::ostream& os) {
  os << "series,status,realized";
  for (const auto& m : kIndexMethods) os << ',' << m;
  os << ",best,note\n";
  for (const auto& r : run_indices(cfg)) {
    os << r.series << ',' << (r.available ? "ok" : "missing") << ',' << fmt_num(r.realized);
    for (std::size_t k = 0; k < kIndexMethods.size(); ++k)
      os << ',' << (k < r.averages.size() ? fmt_num(r.averages[k].second) : "nan");
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    os << ',' << r.best << ',' << note << '\n';
  }
}

void cmd_simulate_bias(const RunConfig& cfg, std::ostream& os) {
  RegimeMixtureSpec spec;
  spec.seed = cfg.seed;
  PlimOptions opt;
  opt.H = cfg.horizon;
  opt.fit = cfg.fit();
  write_plim_csv(os, verify_plim(spec, cfg.reps, opt));
}

void cmd_persona_gap(const RunConfig& cfg, std::ostream& os) {
  os << "vintage,mu_E,mu_Y,mu_0,delta,n_E,n_Y,n_0,mn_E,mn_Y,mn_delta\n";
  for (const auto& r : persona_gaps(cfg)) {
    const PersonaGap& g = r.gap;
    os << g.vintage.str() << ',' << fmt_num(g.mu_E) << ',' << fmt_num(g.mu_Y) << ','
       << (g.mu_0 ? fmt_num(*g.mu_0) : "nan") << ',' << fmt_num(g.delta) << ',' << g.n_E << ',' << g.n_Y << ','
       << g.n_0 << ',' << fmt_num(r.mn_experienced) << ',' << fmt_num(r.mn_young) << ','
       << fmt_num(r.mn_experienced - r.mn_young) << '\n';
  }
}

void cmd_textstats(const RunConfig& cfg, std::ostream& os) { write_cells_csv(os, text_cells(cfg)); }

}  // namespace regimecast::cli
