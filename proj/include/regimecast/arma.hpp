#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "regimecast/data.hpp"
#include "regimecast/optim.hpp"

namespace regimecast {

struct ArmaSpec {
  int p = 1;
  int q = 1;
  int state_dim() const { return std::max(p, q + 1); }
};

/// y_t = alpha + sum_i phi_i y_{t-i} + eps_t + sum_j theta_j eps_{t-j}
template <typename Scalar = double>
struct ArmaParams {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar alpha = 0;
  Vector phi;
  Vector theta;
  Scalar sigma2 = 1;

  ArmaSpec spec() const { return {static_cast<int>(phi.size()), static_cast<int>(theta.size())}; }
  /// Unconditional mean alpha / (1 - sum phi).
  Scalar mean() const { return alpha / (Scalar(1) - phi.sum()); }
  bool stationary() const;
  bool invertible() const;

  static ArmaParams arma11(Scalar alpha, Scalar rho, Scalar theta, Scalar sigma2 = 1) {
    ArmaParams out;
    out.alpha = alpha;
    out.phi = Vector::Constant(1, rho);
    out.theta = Vector::Constant(1, theta);
    out.sigma2 = sigma2;
    return out;
  }
};

using Params = ArmaParams<double>;

/// Forecasts for h = 1..H made at `origin`; values(h-1) is the h-step forecast.
struct ForecastPath {
  MonthDate origin;
  Eigen::VectorXd values;

  int horizon() const { return static_cast<int>(values.size()); }
  MonthDate date(int h) const { return origin + h; }
  double average() const { return values.mean(); }
};

enum class Likelihood {
  exact,        ///< state-space prediction-error decomposition, stationary start
  conditional,  ///< conditional sum of squares, pre-sample errors set to zero
};

struct FitOptions {
  int restarts = 8;
  std::uint64_t seed = 0x5eed1960;
  Likelihood likelihood = Likelihood::exact;
  MinimizeOptions minimize{};
  /// Optional extra starting point (e.g. a neighbouring fit in a sweep).
  const Params* warm_start = nullptr;
  /// When false, fit_mle returns the best point found instead of throwing
  /// NonConvergence (used by sweeps whose windows put the optimum on the
  /// unit-root boundary).
  bool require_convergence = true;
};

struct ArmaFit {
  Params params;
  double loglik = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Output of the prediction-error filter.
template <typename Scalar = double>
struct FilterOutput {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> innovations;  ///< v_t = y_t - E[y_t | y_1..y_{t-1}]
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> scale;        ///< Var(v_t) / sigma2
  /// Smallest eigenvalue of the predicted state covariance over the run
  /// (exact filter only), taken before symmetrisation.
  Scalar min_cov_eigenvalue = Scalar(0);
};

/// Exact Kalman prediction-error filter with stationary initialisation.
template <typename Scalar>
FilterOutput<Scalar> arma_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y, const ArmaParams<Scalar>& par);

/// Conditional recursion with zero pre-sample errors; the first p
/// innovations are zero and their scale entries are zero.
template <typename Scalar>
FilterOutput<Scalar> arma_css_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y, const ArmaParams<Scalar>& par);

/// Gaussian log-likelihood. Each observation's contribution is multiplied by
/// weights(t) when weights is non-empty.
double arma_loglik(const Eigen::VectorXd& y, const Params& par, const Eigen::VectorXd& weights = {},
                   Likelihood lik = Likelihood::exact);

/// Log-likelihood with sigma2 replaced by its (weighted) maximiser; also
/// returns that maximiser through sigma2_hat.
double arma_profile_loglik(const Eigen::VectorXd& y, const Params& par, const Eigen::VectorXd& weights,
                           Likelihood lik, double* sigma2_hat = nullptr);

/// Maximum likelihood with restarts; never throws on non-convergence.
ArmaFit fit_mle_detailed(const Eigen::VectorXd& y, const ArmaSpec& spec, const Eigen::VectorXd& weights = {},
                         const FitOptions& opt = {});

/// Maximum likelihood; throws NonConvergence (with the best point and its
/// gradient norm) or DegenerateSample.
Params fit_mle(const Series& y, const ArmaSpec& spec, const Eigen::VectorXd& weights = {}, const FitOptions& opt = {});

/// One-step innovations from the exact filter; the last entry is eps_T.
Eigen::VectorXd filter_residuals(const Series& y, const Params& par, Likelihood lik = Likelihood::exact);

/// Iterated forecasts. last_y holds y_{T-p+1..T} and last_eps holds
/// eps_{T-q+1..T}, oldest first. MA terms only enter h = 1.
ForecastPath forecast_iterative(const Params& par, const Eigen::VectorXd& last_y, const Eigen::VectorXd& last_eps,
                                int H, MonthDate origin = {});

/// Scalar form for ARMA(1,q<=1).
ForecastPath forecast_iterative(const Params& par, double y_T, double eps_T, int H, MonthDate origin = {});

/// Filters the whole of `history` through `par` and forecasts H steps from its last month.
ForecastPath forecast_from_history(const Params& par, const Series& history, int H,
                                   Likelihood lik = Likelihood::exact);

/// Maps an unconstrained vector to coefficients of a polynomial whose roots
/// lie outside the unit circle (returned as AR coefficients phi).
Eigen::VectorXd pacf_to_coeffs(const Eigen::VectorXd& u);
Eigen::VectorXd coeffs_to_pacf(const Eigen::VectorXd& phi);

/// Draws n observations from an ARMA process started at its stationary
/// mean, after discarding `burn` draws.
Eigen::VectorXd simulate_arma(const Params& par, int n, std::uint64_t seed, int burn = 500);

}  // namespace regimecast
