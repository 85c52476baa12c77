#pragma once

#include <utility>

#include "regimecast/arma.hpp"

namespace regimecast {

using Window = std::pair<MonthDate, MonthDate>;

/// Horizon-indexed forecast errors added to a baseline path.
struct CorrectionVector {
  Eigen::VectorXd errors;
  int horizon() const { return static_cast<int>(errors.size()); }
};

struct AdjustOptions {
  /// First month used when refitting on data up to a reference origin.
  MonthDate estimation_start{1960, 1};
  FitOptions fit{};
};

/// Errors y_{tau+h} - yhat_{tau+h|tau} of fixed-parameter forecasts made at tau
/// from `history` (filtered from estimation_start).
CorrectionVector origin_errors(const Series& y, const Params& par, MonthDate tau, int H, MonthDate estimation_start,
                               Likelihood lik = Likelihood::exact);

/// Single-origin intercept correction: refit on data up to ref_origin, record
/// the H realized errors after it, add them to base.
ForecastPath intercept_correction(const ForecastPath& base, const Series& y, MonthDate ref_origin,
                                  const ArmaSpec& spec, const AdjustOptions& opt = {});

/// Robust intercept correction: fit once on [opt.estimation_start, pre_sample_end]
/// and average the fixed-parameter errors over every origin in `window` that
/// has H realized months after it.
ForecastPath robust_intercept_correction(const ForecastPath& base, const Series& y, const Window& window,
                                         MonthDate pre_sample_end, const ArmaSpec& spec,
                                         const AdjustOptions& opt = {});

/// Same as above with the pre-shock parameters supplied directly.
CorrectionVector average_origin_errors(const Series& y, const Params& par, const Window& window, int H,
                                       MonthDate estimation_start, Likelihood lik = Likelihood::exact);

/// Similarity forecast: fit on slice(y, window), filter `history` (the full
/// sample ending at the forecast origin) through those parameters, forecast.
ForecastPath similarity_forecast(const Series& y, const Window& window, const ArmaSpec& spec, const Series& history,
                                 int H, const FitOptions& fit = {}, Params* fitted = nullptr);

}  // namespace regimecast
