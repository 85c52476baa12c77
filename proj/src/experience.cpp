#include "regimecast/experience.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace regimecast {

template <typename Scalar>
AgentBelief<Scalar> mn_update(const AgentBelief<Scalar>& belief, Scalar pi_prev, Scalar pi_curr) {
  if (belief.age < 0) throw Error(Errc::InvalidArgument, "negative agent age");
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
  AgentBelief<Scalar> out = belief;
  const Scalar g = belief.gain();
  const Vec2 x(Scalar(1), pi_prev);
  out.R = belief.R + g * (x * x.transpose() - belief.R);
  out.R = Scalar(0.5) * (out.R + out.R.transpose());
  if (!out.R.allFinite()) throw Error(Errc::SingularR, "information matrix is not finite");

  Eigen::CompleteOrthogonalDecomposition<Mat2> cod;
  cod.setThreshold(Scalar(1e-12));
  cod.compute(out.R);
  const Vec2 step = cod.solve(x);
  out.b = belief.b + g * step * (pi_curr - belief.b.dot(x));
  out.age = belief.age + 1;
  return out;
}

template AgentBelief<double> mn_update(const AgentBelief<double>&, double, double);

Belief mn_learn(const Series& y, MonthDate career_start, MonthDate through, double gain_const,
                const Eigen::Vector2d& prior) {
  if (!(gain_const > 0.0)) throw Error(Errc::InvalidArgument, "gain constant must be positive");
  if (!y.contains(career_start - 1) || !y.contains(through))
    throw Error(Errc::InsufficientHistory, y.name + ": learning window " + career_start.str() + ".." + through.str() +
                                               " not covered");
  Belief b;
  b.b = prior;
  b.career_start = career_start;
  b.gain_const = gain_const;
  for (MonthDate t = career_start; t <= through; ++t) b = mn_update(b, y.at(t - 1), y.at(t));
  return b;
}

ForecastPath mn_forecast(const Belief& belief, double pi_t, int H, MonthDate origin) {
  if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be at least 1");
  const double mean = belief.perceived_mean();
  ForecastPath out{origin, Eigen::VectorXd(H)};
  double pw = 1.0;
  for (int h = 1; h <= H; ++h) {
    pw *= belief.beta();
    out.values(h - 1) = mean + pw * (pi_t - mean);
  }
  return out;
}

Eigen::VectorXd mn_implied_weights(int n, double gain_const) {
  Eigen::VectorXd w(n);
  double tail = 1.0;  // product of (1 - gamma_j) for j after k
  for (int k = n - 1; k >= 0; --k) {
    const double g = k < gain_const ? 1.0 : gain_const / k;
    w(k) = g * tail;
    tail *= 1.0 - g;
  }
  return w;
}

double mn_vintage_average(const Series& y, MonthDate career_start, MonthDate vintage, int year, double gain_const) {
  const MonthDate last = vintage - 1;
  const Belief b = mn_learn(y, career_start, last, gain_const);
  const MonthDate jan{year, 1};
  double sum = 0.0;
  int h = 0;
  ForecastPath f = mn_forecast(b, y.at(last), std::max(1, MonthDate{year, 12} - last));
  for (MonthDate m = jan; m <= MonthDate{year, 12}; ++m) {
    if (m <= last)
      sum += y.at(m);
    else
      sum += f.values(h++);
  }
  return sum / 12.0;
}

const char* persona_name(Persona p) {
  switch (p) {
    case Persona::Experienced: return "experienced";
    case Persona::Young: return "young";
    case Persona::Neutral: return "neutral";
  }
  return "?";
}

Persona parse_persona(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "experienced" || t == "e") return Persona::Experienced;
  if (t == "young" || t == "y") return Persona::Young;
  if (t == "neutral" || t == "n" || t == "0") return Persona::Neutral;
  throw Error(Errc::InvalidArgument, "unknown persona '" + s + "'");
}

std::vector<PersonaRun> load_runs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path);
  std::string line;
  std::getline(in, line);
  std::vector<PersonaRun> runs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() < 16)
      throw Error(Errc::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected at least 16 columns");
    PersonaRun r;
    r.persona = parse_persona(cells[0]);
    r.vintage = MonthDate::parse(cells[1]);
    r.run_id = std::stoi(cells[2]);
    r.model_id = cells[3];
    for (int h = 0; h < 12; ++h) r.forecasts(h) = std::stod(cells[4 + h]);
    if (!r.forecasts.allFinite())
      throw Error(Errc::InvalidArgument, path + ":" + std::to_string(lineno) + ": non-finite forecast");
    if (cells.size() > 16 && !cells[16].empty()) r.text_path = cells[16];
    runs.push_back(std::move(r));
  }
  return runs;
}

PersonaGap persona_gap(const std::vector<PersonaRun>& runs, MonthDate vintage) {
  double sE = 0, sY = 0, s0 = 0;
  PersonaGap g;
  g.vintage = vintage;
  for (const auto& r : runs) {
    if (r.vintage != vintage) continue;
    switch (r.persona) {
      case Persona::Experienced: sE += r.average(); ++g.n_E; break;
      case Persona::Young: sY += r.average(); ++g.n_Y; break;
      case Persona::Neutral: s0 += r.average(); ++g.n_0; break;
    }
  }
  if (g.n_E == 0 || g.n_Y == 0)
    throw Error(Errc::MissingPersona, "vintage " + vintage.str() + " lacks experienced or young runs");
  g.mu_E = sE / g.n_E;
  g.mu_Y = sY / g.n_Y;
  if (g.n_0 > 0) g.mu_0 = s0 / g.n_0;
  g.delta = g.mu_E - g.mu_Y;
  return g;
}

std::vector<MonthDate> vintages(const std::vector<PersonaRun>& runs) {
  std::vector<MonthDate> v;
  for (const auto& r : runs) v.push_back(r.vintage);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace regimecast
