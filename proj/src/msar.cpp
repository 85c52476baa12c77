#include <cmath>
#include <limits>
#include <random>

#include "regimecast/regime.hpp"

namespace regimecast {

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> MsArParams<Scalar>::ergodic() const {
  const Scalar a = Scalar(1) - P(0, 0);  // leave regime 0
  const Scalar b = Scalar(1) - P(1, 1);  // leave regime 1
  Eigen::Matrix<Scalar, 2, 1> pi;
  if (a + b <= Scalar(0)) {
    pi << Scalar(0.5), Scalar(0.5);
  } else {
    pi << b / (a + b), a / (a + b);
  }
  return pi;
}

template struct MsArParams<double>;

template <typename Scalar>
HamiltonOutput<Scalar> hamilton_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                       const MsArParams<Scalar>& par,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& init) {
  using std::exp;
  using std::log;
  const Eigen::Index n = y.size() - 1;
  HamiltonOutput<Scalar> out;
  out.filtered.resize(std::max<Eigen::Index>(n, 0), 2);
  out.predicted.resize(std::max<Eigen::Index>(n, 0), 2);
  Eigen::Matrix<Scalar, 2, 1> xi = init.size() == 2 ? Eigen::Matrix<Scalar, 2, 1>(init) : par.ergodic();
  const Scalar log2pi = log(Scalar(2) * Scalar(M_PI));
  for (Eigen::Index t = 0; t < n; ++t) {
    // xi holds Pr(s_t | data through t-1) on the first step when init is given
    // as the initial state distribution; afterwards it is propagated by P.
    Eigen::Matrix<Scalar, 2, 1> pred = t == 0 ? xi : Eigen::Matrix<Scalar, 2, 1>(par.P.transpose() * xi);
    Eigen::Matrix<Scalar, 2, 1> logf;
    for (int j = 0; j < 2; ++j) {
      const Scalar e = y(t + 1) - par.alpha(j) - par.rho(j) * y(t);
      logf(j) = Scalar(-0.5) * (log2pi + Scalar(2) * log(par.sigma(j)) + e * e / (par.sigma(j) * par.sigma(j)));
    }
    const Scalar m = logf.maxCoeff();
    Eigen::Matrix<Scalar, 2, 1> joint = pred.array() * (logf.array() - m).exp();
    const Scalar s = joint.sum();
    out.loglik += m + log(s);
    xi = joint / s;
    out.predicted.row(t) = pred.transpose();
    out.filtered.row(t) = xi.transpose();
  }
  return out;
}

template HamiltonOutput<double> hamilton_filter(const Eigen::VectorXd&, const MsArParams<double>&,
                                                const Eigen::VectorXd&);

namespace {

// x = [alpha0, alpha1, atanh rho0, atanh rho1, log sigma0, log sigma1, logit p00, logit p11]
MsArParams<double> unpack_msar(const Eigen::VectorXd& x) {
  MsArParams<double> p;
  p.alpha << x(0), x(1);
  p.rho << std::tanh(x(2)), std::tanh(x(3));
  p.sigma << std::exp(x(4)), std::exp(x(5));
  const double p00 = 1.0 / (1.0 + std::exp(-x(6)));
  const double p11 = 1.0 / (1.0 + std::exp(-x(7)));
  p.P << p00, 1.0 - p00, 1.0 - p11, p11;
  return p;
}

MsArParams<double> swap_labels(const MsArParams<double>& p) {
  MsArParams<double> q;
  q.alpha << p.alpha(1), p.alpha(0);
  q.rho << p.rho(1), p.rho(0);
  q.sigma << p.sigma(1), p.sigma(0);
  q.P << p.P(1, 1), p.P(1, 0), p.P(0, 1), p.P(0, 0);
  return q;
}

}  // namespace

MsArFit fit_msar(const Series& y, const MsArFitOptions& opt) {
  if (y.size() < 200) throw Error(Errc::TooShort, y.name + ": MS-AR needs at least 200 observations");
  const Eigen::VectorXd& v = y.values;
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().mean());
  const double n = static_cast<double>(v.size() - 1);

  Objective obj = [&](const Eigen::VectorXd& x) {
    if (x.segment(4, 2).maxCoeff() > 10.0 || x.segment(4, 2).minCoeff() < -10.0)
      return std::numeric_limits<double>::infinity();
    const double ll = hamilton_filter<double>(v, unpack_msar(x)).loglik;
    return std::isfinite(ll) ? -ll / n : std::numeric_limits<double>::infinity();
  };

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  MinimizeResult best_r;
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    Eigen::VectorXd x0(8);
    if (r == 0) {
      // low / high persistence split around the sample mean
      x0 << 0.3 * mean, 0.6 * mean, std::atanh(0.5), std::atanh(0.5), std::log(0.7 * sd), std::log(1.2 * sd), 2.5,
          2.5;
    } else {
      const double rho0 = -0.5 + 1.4 * ud(rng), rho1 = -0.5 + 1.4 * ud(rng);
      const double m0 = mean + sd * nd(rng), m1 = mean + sd * nd(rng);
      x0 << m0 * (1 - rho0), m1 * (1 - rho1), std::atanh(rho0), std::atanh(rho1), std::log(sd * (0.3 + ud(rng))),
          std::log(sd * (0.3 + ud(rng))), 1.0 + 4.0 * ud(rng), 1.0 + 4.0 * ud(rng);
    }
    MinimizeResult res = bfgs_minimize(obj, x0, opt.minimize);
    if (std::isfinite(res.f) && res.f < best) {
      best = res.f;
      best_r = res;
    }
  }
  if (!std::isfinite(best)) throw Error(Errc::NonConvergence, y.name + ": no MS-AR start gave a finite likelihood");

  MsArFit fit;
  fit.params = unpack_msar(best_r.x);
  fit.converged = best_r.converged;
  const auto m = fit.params.means();
  if (std::abs(m(0) - m(1)) < 1e-6 * (1.0 + std::abs(m(0))) &&
      std::abs(fit.params.sigma(0) - fit.params.sigma(1)) < 1e-6 * fit.params.sigma(0))
    throw Error(Errc::LabelDegeneracy, y.name + ": the two regimes are indistinguishable");
  if (m(0) > m(1)) fit.params = swap_labels(fit.params);

  const auto hf = hamilton_filter<double>(v, fit.params);
  fit.loglik = hf.loglik;
  fit.filtered_high = hf.filtered.col(1);
  fit.filtered_T = hf.filtered.row(hf.filtered.rows() - 1).transpose();
  return fit;
}

ForecastPath forecast_msar(const MsArParams<double>& par, const Eigen::Vector2d& filtered_T, double y_T, int H,
                           MonthDate origin) {
  if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be at least 1");
  if (std::abs(filtered_T.sum() - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "regime probabilities must sum to 1");
  ForecastPath out{origin, Eigen::VectorXd(H)};
  Eigen::Vector2d prob = filtered_T;
  Eigen::Vector2d cond = Eigen::Vector2d::Constant(y_T);  // E[y_{T+h-1} | s_{T+h-1} = i]
  for (int h = 1; h <= H; ++h) {
    const Eigen::Vector2d next = par.P.transpose() * prob;
    Eigen::Vector2d m;
    for (int j = 0; j < 2; ++j) {
      double lag = 0.0;
      if (next(j) > 0.0) {
        for (int i = 0; i < 2; ++i) lag += prob(i) * par.P(i, j) * cond(i);
        lag /= next(j);
      } else {
        lag = prob.dot(cond);
      }
      m(j) = par.alpha(j) + par.rho(j) * lag;
    }
    out.values(h - 1) = next.dot(m);
    prob = next;
    cond = m;
  }
  return out;
}

ForecastPath forecast_msar_enumerate(const MsArParams<double>& par, const Eigen::Vector2d& filtered_T, double y_T,
                                     int H, MonthDate origin) {
  if (H < 1 || H > 20) throw Error(Errc::InvalidArgument, "enumeration supports 1 <= H <= 20");
  ForecastPath out{origin, Eigen::VectorXd::Zero(H)};
  for (int s0 = 0; s0 < 2; ++s0) {
    for (long path = 0; path < (1L << H); ++path) {
      double prob = filtered_T(s0);
      int prev = s0;
      double y = y_T;
      Eigen::VectorXd ys(H);
      for (int h = 0; h < H; ++h) {
        const int s = static_cast<int>((path >> h) & 1L);
        prob *= par.P(prev, s);
        y = par.alpha(s) + par.rho(s) * y;
        ys(h) = y;
        prev = s;
      }
      // Each path contributes to every horizon; paths sharing a prefix are
      // counted with their full-length probability, which sums correctly.
      out.values += prob * ys;
    }
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXi> simulate_msar(const MsArParams<double>& par, int n, std::uint64_t seed,
                                                          int s0, double y0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Eigen::VectorXd y(n);
  Eigen::VectorXi s(n);
  int state = s0;
  double prev = y0;
  for (int t = 0; t < n; ++t) {
    if (t > 0) state = ud(rng) < par.P(state, 0) ? 0 : 1;
    prev = par.alpha(state) + par.rho(state) * prev + par.sigma(state) * nd(rng);
    y(t) = prev;
    s(t) = state;
  }
  return {y, s};
}

}  // namespace regimecast
