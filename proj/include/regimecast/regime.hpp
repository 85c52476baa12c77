#pragma once

#include <cstdint>

#include "regimecast/arma.hpp"

namespace regimecast {

// ---------------------------------------------------------------------------
// Two-regime Markov-switching AR(1)
//   y_t = alpha_s + rho_s y_{t-1} + sigma_s e_t,  P(i, j) = Pr(s_t = j | s_{t-1} = i)
// Regime index 0 is the low-inflation regime (lower alpha / (1 - rho)).
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct MsArParams {
  Eigen::Matrix<Scalar, 2, 1> alpha;
  Eigen::Matrix<Scalar, 2, 1> rho;
  Eigen::Matrix<Scalar, 2, 1> sigma;
  Eigen::Matrix<Scalar, 2, 2> P;

  Eigen::Matrix<Scalar, 2, 1> means() const { return alpha.array() / (Scalar(1) - rho.array()); }
  /// Stationary distribution of P.
  Eigen::Matrix<Scalar, 2, 1> ergodic() const;
};

template <typename Scalar = double>
struct HamiltonOutput {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> filtered;   ///< Pr(s_t = j | y_1..y_t), t = 1..T-1
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> predicted;  ///< Pr(s_t = j | y_1..y_{t-1})
  Scalar loglik = 0;
};

/// Hamilton filter; the first observation is the conditioning lag, so the
/// output has y.size() - 1 rows. The chain starts from `init` or, if empty,
/// from the ergodic distribution.
template <typename Scalar>
HamiltonOutput<Scalar> hamilton_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                       const MsArParams<Scalar>& par,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& init = {});

struct MsArFitOptions {
  int restarts = 16;
  std::uint64_t seed = 0x4d5341;
  MinimizeOptions minimize{};
};

struct MsArFit {
  MsArParams<double> params;
  Eigen::VectorXd filtered_high;  ///< Pr(s_t = high | data through t)
  Eigen::Vector2d filtered_T;     ///< regime probabilities at the last observation
  double loglik = 0.0;
  bool converged = false;
};

/// Direct quasi-Newton maximisation of the Hamilton likelihood with random
/// restarts; relabels so that regime 0 has the lower unconditional mean.
/// Throws LabelDegeneracy if the two regimes coincide.
MsArFit fit_msar(const Series& y, const MsArFitOptions& opt = {});

/// Mean forecast integrating over regime paths: tracks, for each regime, its
/// probability and the mean of y conditional on being in it.
ForecastPath forecast_msar(const MsArParams<double>& par, const Eigen::Vector2d& filtered_T, double y_T, int H,
                           MonthDate origin = {});

/// Brute-force forecast summing over all 2^H regime paths (test oracle).
ForecastPath forecast_msar_enumerate(const MsArParams<double>& par, const Eigen::Vector2d& filtered_T, double y_T,
                                     int H, MonthDate origin = {});

/// Simulates a two-regime series starting in `s0` at y0.
std::pair<Eigen::VectorXd, Eigen::VectorXi> simulate_msar(const MsArParams<double>& par, int n, std::uint64_t seed,
                                                          int s0 = 0, double y0 = 0.0);

// ---------------------------------------------------------------------------
// TVP-AR(4): y_t = x_t' beta_t + e_t, beta_t = beta_{t-1} + eta_t,
// x_t = (1, y_{t-1}, ..., y_{t-4}), Var(eta_t) = q I for t >= break, else 0.
// ---------------------------------------------------------------------------

constexpr int kTvpLags = 4;
constexpr int kTvpDim = kTvpLags + 1;

template <typename Scalar = double>
struct TvpState {
  using Vec = Eigen::Matrix<Scalar, kTvpDim, 1>;
  using Mat = Eigen::Matrix<Scalar, kTvpDim, kTvpDim>;
  Vec beta = Vec::Zero();
  Mat cov = Mat::Zero();
  Scalar meas_var = 1;
};

struct TvpOptions {
  MonthDate prior_start{1960, 1};
  MonthDate prior_end{1990, 12};
  double prior_cov_scale = 4.0;
};

struct TvpRun {
  TvpState<double> state;                 ///< filtered state after the last observation
  Eigen::VectorXd one_step;               ///< y_t|t-1 for each filtered t
  MonthDate first_filtered;               ///< date of one_step(0)
  double min_eigenvalue = 0.0;            ///< smallest covariance eigenvalue seen before symmetrisation
};

/// OLS AR(4) with intercept; returns coefficients, their covariance and the
/// residual variance.
struct OlsAr {
  Eigen::Matrix<double, kTvpDim, 1> coef;
  Eigen::Matrix<double, kTvpDim, kTvpDim> cov;
  double resid_var = 0.0;
};
OlsAr ols_ar4(const Series& y, MonthDate from, MonthDate to);

/// One Kalman step for a random-walk coefficient regression.
template <typename Scalar>
void tvp_step(TvpState<Scalar>& st, const Eigen::Matrix<Scalar, kTvpDim, 1>& x, Scalar y,
              const Eigen::Matrix<Scalar, kTvpDim, kTvpDim>& Q, Scalar* min_eig = nullptr);

/// Filters y from its fifth observation to its end.
TvpRun run_tvp(const Series& y, MonthDate break_date, double q_scale, const TvpOptions& opt = {});

/// Fixed-origin forecast holding beta_T fixed.
ForecastPath fit_forecast_tvp(const Series& y, MonthDate break_date, double q_scale, int H,
                              const TvpOptions& opt = {});

/// One-step forecasts for every month in (y.end(), extended.end()]: the filter
/// keeps updating on `extended` (which must contain y as a prefix).
ForecastPath tvp_recursive_one_step(const Series& extended, MonthDate origin, MonthDate break_date, double q_scale,
                                    const TvpOptions& opt = {});

}  // namespace regimecast
