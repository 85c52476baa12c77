#include "regimecast/adjust.hpp"

namespace regimecast {

namespace {

void require_horizon(const Series& y, MonthDate tau, int H) {
  if (!y.contains(tau) || !y.contains(tau + H))
    throw Error(Errc::InsufficientHistory,
                y.name + ": origin " + tau.str() + " needs realized data through " + (tau + H).str());
}

}  // namespace

CorrectionVector origin_errors(const Series& y, const Params& par, MonthDate tau, int H, MonthDate estimation_start,
                               Likelihood lik) {
  require_horizon(y, tau, H);
  const Series hist = slice(y, std::max(estimation_start, y.start), tau);
  const ForecastPath f = forecast_from_history(par, hist, H, lik);
  CorrectionVector c;
  c.errors = y.values.segment(y.index_of(tau + 1), H) - f.values;
  return c;
}

ForecastPath intercept_correction(const ForecastPath& base, const Series& y, MonthDate ref_origin,
                                  const ArmaSpec& spec, const AdjustOptions& opt) {
  const int H = base.horizon();
  require_horizon(y, ref_origin, H);
  const Series est = slice(y, std::max(opt.estimation_start, y.start), ref_origin);
  const Params par = fit_mle(est, spec, {}, opt.fit);
  const CorrectionVector c = origin_errors(y, par, ref_origin, H, opt.estimation_start, opt.fit.likelihood);
  return {base.origin, base.values + c.errors};
}

CorrectionVector average_origin_errors(const Series& y, const Params& par, const Window& window, int H,
                                       MonthDate estimation_start, Likelihood lik) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(H);
  int n = 0;
  for (MonthDate tau = window.first; tau <= window.second; ++tau) {
    if (!y.contains(tau + H)) continue;  // origins without a full H-month realization are dropped
    sum += origin_errors(y, par, tau, H, estimation_start, lik).errors;
    ++n;
  }
  if (n == 0) throw Error(Errc::InsufficientHistory, "no origin in the window has H realized months");
  return {sum / n};
}

ForecastPath robust_intercept_correction(const ForecastPath& base, const Series& y, const Window& window,
                                         MonthDate pre_sample_end, const ArmaSpec& spec, const AdjustOptions& opt) {
  if (pre_sample_end > window.first)
    throw Error(Errc::InvalidArgument, "pre-shock sample ends after the first origin");
  const Series est = slice(y, std::max(opt.estimation_start, y.start), pre_sample_end);
  const Params par = fit_mle(est, spec, {}, opt.fit);
  const CorrectionVector c =
      average_origin_errors(y, par, window, base.horizon(), opt.estimation_start, opt.fit.likelihood);
  return {base.origin, base.values + c.errors};
}

ForecastPath similarity_forecast(const Series& y, const Window& window, const ArmaSpec& spec, const Series& history,
                                 int H, const FitOptions& fit, Params* fitted) {
  const Params par = fit_mle(slice(y, window.first, window.second), spec, {}, fit);
  if (fitted) *fitted = par;
  return forecast_from_history(par, history, H, fit.likelihood);
}

}  // namespace regimecast
