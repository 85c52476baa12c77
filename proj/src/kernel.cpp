#include "regimecast/kernel.hpp"

#include <cmath>
#include <limits>

namespace regimecast {

std::vector<double> bandwidth_grid(const Eigen::VectorXd& z, int n, double lo_mult, double hi_mult) {
  const double mean = z.mean();
  const double sd = std::sqrt((z.array() - mean).square().sum() / std::max<Eigen::Index>(1, z.size() - 1));
  std::vector<double> grid(n);
  const double lo = std::log(lo_mult * sd), hi = std::log(hi_mult * sd);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return grid;
}

double weighted_cv_score(const Eigen::VectorXd& y, const KernelWeights<double>& kw, const ArmaSpec& spec,
                         const CvOptions& opt) {
  const Eigen::Index n = y.size();
  const Eigen::Index first = n - static_cast<Eigen::Index>(std::floor(opt.holdout_share * n));
  if (first <= 10 * (spec.p + spec.q + 1)) throw Error(Errc::TooShort, "sample too short for the CV holdout");

  FitOptions fit = opt.fit;
  Params prev;
  bool have_prev = false;
  double score = 0.0, mass_out = 0.0;
  for (Eigen::Index block = first; block < n; block += opt.refit_every) {
    const Eigen::Index block_end = std::min(n, block + opt.refit_every);
    Eigen::VectorXd w = kw.weights.head(block);
    const double mass = w.sum();
    if (mass > 0.0) w /= mass;
    if (have_prev) fit.warm_start = &prev;
    ArmaFit f = fit_mle_detailed(y.head(block), spec, w, fit);
    prev = f.params;
    have_prev = true;
    // One-step errors for dates block..block_end-1 with parameters held fixed.
    const Eigen::VectorXd ys = y.head(block_end);
    const auto out = fit.likelihood == Likelihood::exact ? arma_filter(ys, f.params) : arma_css_filter(ys, f.params);
    for (Eigen::Index t = block; t < block_end; ++t) {
      score += kw.weights(t) * out.innovations(t) * out.innovations(t);
      mass_out += kw.weights(t);
    }
  }
  if (!(mass_out > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return score / mass_out;
}

std::vector<BandwidthScore> score_bandwidths(const Eigen::VectorXd& y, const Eigen::VectorXd& z, double z_T,
                                             const std::vector<double>& grid, double ess_floor, const ArmaSpec& spec,
                                             const CvOptions& opt) {
  if (grid.empty()) throw Error(Errc::InvalidArgument, "empty bandwidth grid");
  if (ess_floor < 1.0) throw Error(Errc::InvalidArgument, "ESS floor below 1");
  std::vector<BandwidthScore> out;
  out.reserve(grid.size());
  for (double b : grid) {
    if (!(b > 0.0)) throw Error(Errc::InvalidArgument, "bandwidths must be positive");
    BandwidthScore s{b, 0.0, std::numeric_limits<double>::quiet_NaN()};
    KernelWeights<double> kw;
    try {
      kw = gaussian_weights<double>(z, z_T, b);
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroMass) throw;
      out.push_back(s);
      continue;
    }
    s.ess = kw.ess;
    if (kw.ess >= ess_floor) s.cv = weighted_cv_score(y, kw, spec, opt);
    out.push_back(s);
  }
  return out;
}

double select_bandwidth(const Eigen::VectorXd& y, const Eigen::VectorXd& z, double z_T,
                        const std::vector<double>& grid, double ess_floor, const ArmaSpec& spec,
                        const CvOptions& opt) {
  const auto scores = score_bandwidths(y, z, z_T, grid, ess_floor, spec, opt);
  const BandwidthScore* best = nullptr;
  for (const auto& s : scores) {
    if (std::isnan(s.cv)) continue;
    if (!best || s.cv < best->cv || (s.cv == best->cv && s.bandwidth > best->bandwidth)) best = &s;
  }
  if (!best) throw Error(Errc::NoFeasibleBandwidth, "no grid bandwidth reaches the ESS floor");
  return best->bandwidth;
}

KernelForecast kernel_forecast(const Series& y, const Series& z, double b, const Series& history, int H,
                               const ArmaSpec& spec, const FitOptions& fit) {
  if (y.start != z.start || y.size() != z.size())
    throw Error(Errc::InvalidArgument, "state series must share the target's calendar");
  KernelForecast out;
  out.weights = gaussian_weights<double>(z.values, z.values(z.size() - 1), b);
  out.params = fit_mle(y, spec, out.weights.weights, fit);
  out.path = forecast_from_history(out.params, history, H, fit.likelihood);
  return out;
}

}  // namespace regimecast
