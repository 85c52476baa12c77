#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance harness.

#include <cmath>

#include "regimecast/arma.hpp"
#include "regimecast/regime.hpp"

namespace oracles {

using regimecast::MsArParams;
using regimecast::Params;

/// Autocovariances gamma_0..gamma_max_lag from a truncated MA(infinity) expansion.
inline Eigen::VectorXd autocov(const Params& par, int max_lag) {
  const int m = 4000;
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(m);
  psi(0) = 1.0;
  for (int j = 1; j < m; ++j) {
    double v = j <= par.theta.size() ? par.theta(j - 1) : 0.0;
    for (int i = 1; i <= par.phi.size() && i <= j; ++i) v += par.phi(i - 1) * psi(j - i);
    psi(j) = v;
  }
  Eigen::VectorXd g(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k) g(k) = par.sigma2 * psi.head(m - k).dot(psi.tail(m - k));
  return g;
}

inline Eigen::MatrixXd toeplitz(const Eigen::VectorXd& g, int n) {
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g(std::abs(i - j));
  return G;
}

inline double gaussian_logpdf(const Eigen::VectorXd& x, const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(x);
  return -0.5 * (x.size() * std::log(2.0 * M_PI) + 2.0 * L.diagonal().array().log().sum() + z.squaredNorm());
}

/// Innovations and their variances from conditioning the joint Gaussian of
/// y on its past, one observation at a time.
struct Conditioning {
  Eigen::VectorXd innovations, variances;
  double loglik;
};

inline Conditioning gaussian_conditioning(const Eigen::VectorXd& y, const Params& par) {
  const int n = static_cast<int>(y.size());
  const Eigen::MatrixXd G = toeplitz(autocov(par, n), n);
  const Eigen::VectorXd x = y.array() - par.mean();
  Conditioning c{Eigen::VectorXd(n), Eigen::VectorXd(n), gaussian_logpdf(x, G)};
  for (int t = 0; t < n; ++t) {
    double pred = 0.0, var = G(t, t);
    if (t > 0) {
      const Eigen::VectorXd cov = G.row(t).head(t).transpose();
      const Eigen::VectorXd b = G.topLeftCorner(t, t).ldlt().solve(cov);
      pred = b.dot(x.head(t));
      var -= b.dot(cov);
    }
    c.innovations(t) = x(t) - pred;
    c.variances(t) = var;
  }
  return c;
}

inline double normal_pdf(double e, double s) {
  return std::exp(-0.5 * e * e / (s * s)) / (std::sqrt(2.0 * M_PI) * s);
}

/// Filtered regime probabilities and log-likelihood by summing over every
/// regime path, starting from the ergodic distribution. Row t conditions on
/// y(0..t+1).
struct Enumeration {
  Eigen::MatrixXd filtered;
  double loglik;
};

inline Enumeration enumerate_regimes(const Eigen::VectorXd& y, const MsArParams<double>& par) {
  const int n = static_cast<int>(y.size()) - 1;
  const Eigen::Vector2d pi0 = par.ergodic();
  auto prefix = [&](int t, int path) {
    double pr = pi0(path & 1);
    int prev = path & 1;
    for (int k = 0; k <= t; ++k) {
      const int s = (path >> k) & 1;
      if (k > 0) pr *= par.P(prev, s);
      pr *= normal_pdf(y(k + 1) - par.alpha(s) - par.rho(s) * y(k), par.sigma(s));
      prev = s;
    }
    return pr;
  };
  Enumeration e{Eigen::MatrixXd(n, 2), 0.0};
  for (int t = 0; t < n; ++t) {
    Eigen::Vector2d mass = Eigen::Vector2d::Zero();
    for (int path = 0; path < (1 << (t + 1)); ++path) mass((path >> t) & 1) += prefix(t, path);
    e.filtered.row(t) = (mass / mass.sum()).transpose();
    if (t == n - 1) e.loglik = std::log(mass.sum());
  }
  return e;
}

}  // namespace oracles
