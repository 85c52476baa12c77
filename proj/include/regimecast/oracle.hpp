#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "regimecast/arma.hpp"

namespace regimecast {

/// A normal-regime block of length t_N followed by a crisis-regime block of
/// length t_C, each an ARMA with its own parameters.
struct RegimeMixtureSpec {
  Params params_N = Params::arma11(0.5, 0.8, -0.3, 1.0);
  Params params_C = Params::arma11(2.0, 0.8, -0.3, 1.0);
  int t_N = 600;
  int t_C = 120;
  std::uint64_t seed = 20210101;
};

/// Independent stream seed for replication `rep` (SplitMix64 mix).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep);

/// Simulated series of length t_N + t_C + extra: the last `extra` draws
/// continue regime C past the estimation sample (used as realized outcomes).
Eigen::VectorXd simulate_mixture(const RegimeMixtureSpec& spec, int extra = 0);

struct PlimOptions {
  int H = 12;
  /// Crisis shares T_C / T for the convergence schedule (descending).
  std::vector<double> shares{0.5, 0.25, 0.125, 0.0625, 0.0};
  int schedule_reps = 100;
  /// Crisis-block length for the similarity refit check. A long block keeps
  /// the transition out of the normal regime from dominating the refit.
  int similarity_t_C = 500;
  FitOptions fit{};
};

struct RepRecord {
  int rep = 0;
  double t_c_share = 0.0;
  double alpha_hat = 0.0;
  Eigen::VectorXd bias;  ///< realized - forecast at the regime-C origin, h = 1..H
};

struct PlimReport {
  std::vector<RepRecord> records;  ///< baseline replications
  double alpha_hat_mean = 0.0;
  bool alpha_in_interval = false;

  Eigen::VectorXd bias_mean, bias_se, bias_p;  ///< one-sided p-values for Bias_h > 0
  bool bias_positive_all = false;
  double max_bias_p = 1.0;

  std::vector<double> schedule_share;
  std::vector<double> schedule_alpha;  ///< mean alpha_hat along shares
  bool schedule_converges = false;     ///< distance to alpha_N shrinks along the schedule

  Eigen::VectorXd sim_bias_mean, sim_bias_se;  ///< similarity refit on the C block only
  double sim_bias_max_abs_t = 0.0;
};

/// Monte-Carlo check of the rare-regime bias framework. Requires reps >= 100.
PlimReport verify_plim(const RegimeMixtureSpec& spec, int reps, const PlimOptions& opt = {});

/// rep,t_c_share,alpha_hat,bias_h1..bias_hH
void write_plim_csv(std::ostream& os, const PlimReport& report);

}  // namespace regimecast
