#include "regimecast/optim.hpp"

#include <cmath>
#include <limits>

namespace regimecast {

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x(i)));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

MinimizeResult bfgs_minimize(const Objective& f, Eigen::VectorXd x, const MinimizeOptions& opt) {
  const Eigen::Index n = x.size();
  MinimizeResult res;
  double fx = f(x);
  if (!std::isfinite(fx)) {
    res.x = x;
    res.f = std::numeric_limits<double>::infinity();
    return res;
  }
  Eigen::VectorXd g = numeric_gradient(f, x);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  int small_steps = 0;
  bool reset_once = false;

  int it = 0;
  for (; it < opt.max_iter; ++it) {
    if (g.norm() < opt.grad_tol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd dir = -Hinv * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    // Keep trial points in a sane region of the transformed space.
    const double dmax = dir.cwiseAbs().maxCoeff();
    double step = dmax > 5.0 ? 5.0 / dmax : 1.0;

    double f_new = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (reset_once) {
        res.converged = g.norm() < 1e-3 * std::max(1.0, std::abs(fx));
        break;
      }
      reset_once = true;
      Hinv.setIdentity();
      continue;
    }
    reset_once = false;

    Eigen::VectorXd g_new = numeric_gradient(f, x_new);
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (it == 0) Hinv *= sy / yv.squaredNorm();
      const double rho = 1.0 / sy;
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) + rho * s * s.transpose();
    }

    const double rel = std::abs(fx - f_new) / std::max(std::abs(fx), 1e-10);
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    small_steps = rel < opt.rel_tol ? small_steps + 1 : 0;
    if (small_steps >= 2) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.x = x;
  res.f = fx;
  res.grad_norm = g.norm();
  res.iterations = it;
  return res;
}

}  // namespace regimecast
