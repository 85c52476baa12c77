#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regimecast/arma.hpp"

namespace regimecast {

/// Recursive perceived-AR(1) belief pi_t = alpha + beta pi_{t-1} with an
/// age-dependent gain (experience-based learning).
template <typename Scalar = double>
struct AgentBelief {
  Eigen::Matrix<Scalar, 2, 1> b = Eigen::Matrix<Scalar, 2, 1>::Zero();  ///< (alpha, beta)
  Eigen::Matrix<Scalar, 2, 2> R = Eigen::Matrix<Scalar, 2, 2>::Zero();
  MonthDate career_start{};
  Scalar gain_const = Scalar(3.044);
  int age = 0;  ///< months since career_start

  Scalar alpha() const { return b(0); }
  Scalar beta() const { return b(1); }
  /// alpha / (1 - beta); requires |beta| < 1.
  Scalar perceived_mean() const {
    using std::abs;
    if (!(abs(b(1)) < Scalar(1))) throw Error(Errc::NonStationaryBelief, "perceived persistence |beta| >= 1");
    return b(0) / (Scalar(1) - b(1));
  }
  /// gamma = 1 while age < gain_const, gain_const / age afterwards.
  Scalar gain() const {
    return static_cast<Scalar>(age) < gain_const ? Scalar(1) : gain_const / static_cast<Scalar>(age);
  }
};

using Belief = AgentBelief<double>;

/// One learning step with regressor x = (1, pi_prev):
///   R' = R + g (x x' - R),  b' = b + g R'^+ x (pi_curr - b'x).
/// While R' is singular (the first updates, or a constant stream) the
/// minimum-norm solution R'^+ is used in place of the inverse.
template <typename Scalar>
AgentBelief<Scalar> mn_update(const AgentBelief<Scalar>& belief, Scalar pi_prev, Scalar pi_curr);

/// Runs the recursion over y from belief.career_start through `through`,
/// starting from age 0. y must contain the month before career_start.
Belief mn_learn(const Series& y, MonthDate career_start, MonthDate through, double gain_const = 3.044,
                const Eigen::Vector2d& prior = Eigen::Vector2d::Zero());

/// pi_bar + beta^h (pi_t - pi_bar) for h = 1..H.
ForecastPath mn_forecast(const Belief& belief, double pi_t, int H, MonthDate origin = {});

/// Weights implied by the recursion: R_T = sum_k w_k x_k x_k' (test oracle).
Eigen::VectorXd mn_implied_weights(int n, double gain_const);

// ---------------------------------------------------------------------------
// Persona run records
// ---------------------------------------------------------------------------

enum class Persona { Experienced, Young, Neutral };

const char* persona_name(Persona p);
Persona parse_persona(const std::string& s);

struct PersonaRun {
  Persona persona = Persona::Neutral;
  MonthDate vintage;
  int run_id = 0;
  std::string model_id;
  Eigen::Matrix<double, 12, 1> forecasts = Eigen::Matrix<double, 12, 1>::Zero();
  std::optional<std::string> text_path;  ///< relative to the record file's directory

  double average() const { return forecasts.mean(); }
};

/// Reads persona,vintage,run_id,model_id,f1..f12,text_path.
std::vector<PersonaRun> load_runs(const std::string& path);

struct PersonaGap {
  MonthDate vintage;
  double mu_E = 0.0;
  double mu_Y = 0.0;
  std::optional<double> mu_0;
  double delta = 0.0;  ///< mu_E - mu_Y
  int n_E = 0, n_Y = 0, n_0 = 0;
};

/// Cell means pooled across models; throws MissingPersona without E and Y runs.
PersonaGap persona_gap(const std::vector<PersonaRun>& runs, MonthDate vintage);

/// Sorted distinct vintages in the records.
std::vector<MonthDate> vintages(const std::vector<PersonaRun>& runs);

/// Calendar-year average seen by a learning agent at `vintage`: months
/// before the vintage come from `y`, the rest from mn_forecast made at
/// the last observed month.
double mn_vintage_average(const Series& y, MonthDate career_start, MonthDate vintage, int year,
                          double gain_const = 3.044);

}  // namespace regimecast
