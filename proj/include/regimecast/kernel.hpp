#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "regimecast/arma.hpp"

namespace regimecast {

/// Normalized observation weights w_t proportional to K((z_t - z_T) / b).
template <typename Scalar = double>
struct KernelWeights {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  Scalar bandwidth = 1;
  Scalar state_origin = 0;
  Scalar ess = 1;  ///< 1 / sum w_t^2
};

/// Gaussian kernel K(u) = exp(-u^2 / 2). Throws ZeroMass if every kernel
/// value underflows.
template <typename Scalar>
KernelWeights<Scalar> gaussian_weights(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& z, Scalar z_T, Scalar b) {
  if (!(b > Scalar(0))) throw Error(Errc::InvalidArgument, "bandwidth must be positive");
  if (z.size() == 0) throw Error(Errc::InvalidArgument, "empty state series");
  KernelWeights<Scalar> kw;
  kw.bandwidth = b;
  kw.state_origin = z_T;
  // Vectorized exp saturates at the smallest normal number instead of
  // returning zero, so underflow is decided on the exponent.
  using std::log;
  const Scalar log_min = log(std::numeric_limits<Scalar>::min());
  const auto expo = (Scalar(-0.5) * ((z.array() - z_T) / b).square()).eval();
  kw.weights = (expo < log_min).select(Scalar(0), expo.exp()).matrix();
  const Scalar mass = kw.weights.sum();
  if (!(mass > Scalar(0))) throw Error(Errc::ZeroMass, "all kernel weights underflow; bandwidth too small");
  kw.weights /= mass;
  kw.ess = Scalar(1) / kw.weights.squaredNorm();
  return kw;
}

/// 60 (by default) log-spaced bandwidths on [lo_mult * sd(z), hi_mult * sd(z)].
std::vector<double> bandwidth_grid(const Eigen::VectorXd& z, int n = 60, double lo_mult = 0.05, double hi_mult = 50.0);

struct CvOptions {
  double holdout_share = 0.2;  ///< trailing share of the sample used for pseudo out-of-sample errors
  int refit_every = 12;
  FitOptions fit{};
};

struct BandwidthScore {
  double bandwidth;
  double ess;
  double cv;  ///< NaN when the ESS floor excludes this bandwidth
};

/// Kernel-weighted mean squared one-step error over the holdout:
/// expanding-window refits every `refit_every` observations, each squared
/// error multiplied by the kernel weight of its date, divided by the holdout
/// weight mass. NaN when the holdout carries no weight.
double weighted_cv_score(const Eigen::VectorXd& y, const KernelWeights<double>& kw, const ArmaSpec& spec,
                         const CvOptions& opt = {});

/// Scores every grid point (infeasible ones get cv = NaN).
std::vector<BandwidthScore> score_bandwidths(const Eigen::VectorXd& y, const Eigen::VectorXd& z, double z_T,
                                             const std::vector<double>& grid, double ess_floor, const ArmaSpec& spec,
                                             const CvOptions& opt = {});

/// Minimizer of the CV score among bandwidths whose ESS meets the floor;
/// ties go to the larger bandwidth.
double select_bandwidth(const Eigen::VectorXd& y, const Eigen::VectorXd& z, double z_T,
                        const std::vector<double>& grid, double ess_floor, const ArmaSpec& spec,
                        const CvOptions& opt = {});

struct KernelForecast {
  ForecastPath path;
  Params params;
  KernelWeights<double> weights;
};

/// Weighted fit on y with weights from z (same calendar as y, origin state =
/// z's last value), then forecasts from the end of `history`.
KernelForecast kernel_forecast(const Series& y, const Series& z, double b, const Series& history, int H,
                               const ArmaSpec& spec, const FitOptions& fit = {});

}  // namespace regimecast
