#pragma once

#include <Eigen/Dense>
#include <functional>

namespace regimecast {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct MinimizeOptions {
  int max_iter = 500;
  /// Stop once the relative objective change stays below this.
  double rel_tol = 1e-9;
  double grad_tol = 1e-8;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Central finite-difference gradient.
Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step = 1e-5);

/// BFGS on an unconstrained objective with finite-difference gradients and a
/// backtracking Armijo line search. Non-finite objective values are treated as
/// infeasible and trigger a shorter step.
MinimizeResult bfgs_minimize(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& opt = {});

}  // namespace regimecast
