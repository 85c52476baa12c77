#include "regimecast/arma.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace regimecast {

namespace {

constexpr int kMaxState = 8;
template <typename Scalar>
using SmallMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxState, kMaxState>;
template <typename Scalar>
using SmallVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxState, 1>;

// Companion-matrix spectral radius of 1 - c_1 z - ... - c_k z^k.
template <typename Scalar>
bool roots_outside(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c) {
  const auto k = c.size();
  if (k == 0) return true;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index j = 0; j < k; ++j) C(0, j) = static_cast<double>(c(j));
  for (Eigen::Index j = 1; j < k; ++j) C(j, j - 1) = 1.0;
  return C.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

// Solves P = T P T' + Q for the stationary state covariance.
template <typename Scalar>
SmallMat<Scalar> stationary_cov(const SmallMat<Scalar>& T, const SmallMat<Scalar>& Q) {
  const auto r = T.rows();
  using Big = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Big K = Big::Identity(r * r, r * r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index k = 0; k < r; ++k)
        for (Eigen::Index l = 0; l < r; ++l) K(i * r + k, j * r + l) -= T(i, j) * T(k, l);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> q(r * r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < r; ++k) q(i * r + k) = Q(i, k);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = K.partialPivLu().solve(q);
  SmallMat<Scalar> P(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < r; ++k) P(i, k) = p(i * r + k);
  return Scalar(0.5) * (P + P.transpose());
}

}  // namespace

template <typename Scalar>
bool ArmaParams<Scalar>::stationary() const {
  return roots_outside<Scalar>(phi);
}

template <typename Scalar>
bool ArmaParams<Scalar>::invertible() const {
  return roots_outside<Scalar>(Vector(-theta));
}

template struct ArmaParams<double>;

template <typename Scalar>
FilterOutput<Scalar> arma_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y, const ArmaParams<Scalar>& par) {
  const int p = static_cast<int>(par.phi.size());
  const int q = static_cast<int>(par.theta.size());
  const int r = std::max(p, q + 1);
  if (r > kMaxState) throw Error(Errc::InvalidArgument, "ARMA order too large for the state-space filter");

  // Harvey form: alpha_{t+1} = T alpha_t + R eps_{t+1}, y_t - mu = alpha_t(0).
  SmallMat<Scalar> T = SmallMat<Scalar>::Zero(r, r);
  for (int i = 0; i < p; ++i) T(i, 0) = par.phi(i);
  for (int i = 0; i + 1 < r; ++i) T(i, i + 1) = 1;
  SmallVec<Scalar> R = SmallVec<Scalar>::Zero(r);
  R(0) = 1;
  for (int j = 0; j < q; ++j) R(j + 1) = par.theta(j);
  const SmallMat<Scalar> RR = R * R.transpose();

  const Scalar mu = par.mean();
  SmallVec<Scalar> a = SmallVec<Scalar>::Zero(r);
  SmallMat<Scalar> P = stationary_cov<Scalar>(T, RR);

  FilterOutput<Scalar> out;
  const auto n = y.size();
  out.innovations.resize(n);
  out.scale.resize(n);
  bool steady = false;
  auto min_eig = [](const SmallMat<Scalar>& M) {
    return Eigen::SelfAdjointEigenSolver<SmallMat<Scalar>>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  };
  out.min_cov_eigenvalue = min_eig(P);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Scalar f = P(0, 0);
    const Scalar v = y(t) - mu - a(0);
    out.innovations(t) = v;
    out.scale(t) = f;
    const SmallVec<Scalar> K = P.col(0) / f;
    a = T * (a + K * v);
    if (!steady) {
      SmallMat<Scalar> Pu = P - K * P.row(0);
      SmallMat<Scalar> Pn = T * Pu * T.transpose() + RR;
      using std::min;
      out.min_cov_eigenvalue = min(out.min_cov_eigenvalue, min_eig(Pn));
      Pn = Scalar(0.5) * (Pn + Pn.transpose());
      using std::abs;
      steady = (Pn - P).cwiseAbs().maxCoeff() < Scalar(1e-15) * (Scalar(1) + abs(Pn(0, 0)));
      P = Pn;
    }
  }
  return out;
}

template <typename Scalar>
FilterOutput<Scalar> arma_css_filter(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                     const ArmaParams<Scalar>& par) {
  const int p = static_cast<int>(par.phi.size());
  const int q = static_cast<int>(par.theta.size());
  const auto n = y.size();
  FilterOutput<Scalar> out;
  out.innovations = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  out.scale = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Eigen::Index t = p; t < n; ++t) {
    Scalar pred = par.alpha;
    for (int i = 0; i < p; ++i) pred += par.phi(i) * y(t - 1 - i);
    for (int j = 0; j < q; ++j)
      if (t - 1 - j >= 0) pred += par.theta(j) * out.innovations(t - 1 - j);
    out.innovations(t) = y(t) - pred;
    out.scale(t) = 1;
  }
  return out;
}

template FilterOutput<double> arma_filter(const Eigen::VectorXd&, const ArmaParams<double>&);
template FilterOutput<double> arma_css_filter(const Eigen::VectorXd&, const ArmaParams<double>&);

namespace {

FilterOutput<double> run_filter(const Eigen::VectorXd& y, const Params& par, Likelihood lik) {
  return lik == Likelihood::exact ? arma_filter(y, par) : arma_css_filter(y, par);
}

}  // namespace

double arma_profile_loglik(const Eigen::VectorXd& y, const Params& par, const Eigen::VectorXd& weights,
                           Likelihood lik, double* sigma2_hat) {
  const auto f = run_filter(y, par, lik);
  const bool weighted = weights.size() > 0;
  double wsum = 0.0, ss = 0.0, logdet = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (f.scale(t) <= 0.0) continue;
    const double w = weighted ? weights(t) : 1.0;
    wsum += w;
    ss += w * f.innovations(t) * f.innovations(t) / f.scale(t);
    logdet += w * std::log(f.scale(t));
  }
  const double s2 = ss / wsum;
  if (sigma2_hat) *sigma2_hat = s2;
  if (!(s2 > 0.0) || !std::isfinite(s2)) return -std::numeric_limits<double>::infinity();
  return -0.5 * (wsum * (std::log(2.0 * M_PI) + std::log(s2) + 1.0) + logdet);
}

double arma_loglik(const Eigen::VectorXd& y, const Params& par, const Eigen::VectorXd& weights, Likelihood lik) {
  const auto f = run_filter(y, par, lik);
  const bool weighted = weights.size() > 0;
  double ll = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    if (f.scale(t) <= 0.0) continue;
    const double F = par.sigma2 * f.scale(t);
    const double w = weighted ? weights(t) : 1.0;
    ll += w * -0.5 * (std::log(2.0 * M_PI * F) + f.innovations(t) * f.innovations(t) / F);
  }
  return ll;
}

Eigen::VectorXd pacf_to_coeffs(const Eigen::VectorXd& u) {
  const auto k = u.size();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd prev(k);
  for (Eigen::Index m = 0; m < k; ++m) {
    const double r = std::tanh(u(m));
    prev = phi;
    for (Eigen::Index j = 0; j < m; ++j) phi(j) = prev(j) - r * prev(m - 1 - j);
    phi(m) = r;
  }
  return phi;
}

Eigen::VectorXd coeffs_to_pacf(const Eigen::VectorXd& phi_in) {
  const auto k = phi_in.size();
  Eigen::VectorXd phi = phi_in;
  Eigen::VectorXd u(k);
  for (Eigen::Index m = k - 1; m >= 0; --m) {
    const double r = std::clamp(phi(m), -0.999999, 0.999999);
    u(m) = std::atanh(r);
    Eigen::VectorXd prev = phi;
    for (Eigen::Index j = 0; j < m; ++j) phi(j) = (prev(j) + r * prev(m - 1 - j)) / (1.0 - r * r);
  }
  return u;
}

namespace {

// Unconstrained vector: [mu, AR partials (p), MA partials (q)].
Params unpack(const Eigen::VectorXd& x, const ArmaSpec& s) {
  Params par;
  par.phi = pacf_to_coeffs(x.segment(1, s.p));
  par.theta = -pacf_to_coeffs(x.segment(1 + s.p, s.q));
  par.alpha = x(0) * (1.0 - par.phi.sum());
  return par;
}

Eigen::VectorXd pack(const Params& par) {
  const auto s = par.spec();
  Eigen::VectorXd x(1 + s.p + s.q);
  x(0) = par.mean();
  x.segment(1, s.p) = coeffs_to_pacf(par.phi);
  x.segment(1 + s.p, s.q) = coeffs_to_pacf(-par.theta);
  return x;
}

// Weighted least-squares AR(p) fit used for the deterministic start.
Eigen::VectorXd ols_ar(const Eigen::VectorXd& y, int p, const Eigen::VectorXd& w) {
  const auto n = y.size() - p;
  Eigen::MatrixXd X(n, p + 1);
  Eigen::VectorXd Y = y.tail(n);
  Eigen::VectorXd sw = Eigen::VectorXd::Ones(n);
  if (w.size() > 0) sw = w.tail(n).cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index t = 0; t < n; ++t) {
    X(t, 0) = 1.0;
    for (int i = 0; i < p; ++i) X(t, 1 + i) = y(p + t - 1 - i);
  }
  X = sw.asDiagonal() * X;
  Y = sw.asDiagonal() * Y;
  return X.colPivHouseholderQr().solve(Y);
}

}  // namespace

ArmaFit fit_mle_detailed(const Eigen::VectorXd& y, const ArmaSpec& spec, const Eigen::VectorXd& weights,
                         const FitOptions& opt) {
  const int k = spec.p + spec.q + 1;
  if (spec.p < 0 || spec.q < 0) throw Error(Errc::InvalidArgument, "negative ARMA order");
  if (y.size() <= 10 * k) throw Error(Errc::TooShort, "need more than 10*(p+q+1) observations");
  if (weights.size() > 0 && weights.size() != y.size())
    throw Error(Errc::InvalidArgument, "weights and series differ in length");
  const double ymean = y.mean();
  const double ysd = std::sqrt((y.array() - ymean).square().mean());
  if (!(ysd > 1e-12 * std::max(1.0, std::abs(ymean)))) throw Error(Errc::DegenerateSample, "constant series");

  // Scaling the objective by the (weighted) sample size keeps the relative
  // tolerance meaningful for both weighted and unweighted fits.
  const double wtot = weights.size() > 0 ? weights.sum() : static_cast<double>(y.size());
  Objective obj = [&](const Eigen::VectorXd& x) {
    Params par = unpack(x, spec);
    const double ll = arma_profile_loglik(y, par, weights, opt.likelihood);
    return std::isfinite(ll) ? -ll / wtot : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> starts;
  {
    Params s0;
    double mu0 = ymean;
    if (weights.size() > 0) mu0 = weights.dot(y) / weights.sum();
    s0.phi = Eigen::VectorXd::Zero(spec.p);
    if (spec.p > 0) {
      Eigen::VectorXd b = ols_ar(y, spec.p, weights);
      s0.phi = b.tail(spec.p);
      if (!s0.stationary()) s0.phi *= 0.5 / std::max(1.0, s0.phi.cwiseAbs().sum());
    }
    s0.theta = Eigen::VectorXd::Zero(spec.q);
    s0.alpha = mu0 * (1.0 - s0.phi.sum());
    starts.push_back(pack(s0));
    if (opt.warm_start && opt.warm_start->spec().p == spec.p && opt.warm_start->spec().q == spec.q &&
        opt.warm_start->stationary() && opt.warm_start->invertible())
      starts.push_back(pack(*opt.warm_start));
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    while (static_cast<int>(starts.size()) < std::max(1, opt.restarts)) {
      Eigen::VectorXd x(k);
      x(0) = mu0 + 0.5 * ysd * nd(rng);
      for (int i = 1; i < k; ++i) x(i) = nd(rng);
      starts.push_back(x);
    }
  }

  ArmaFit best;
  best.loglik = -std::numeric_limits<double>::infinity();
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& x0 : starts) {
    MinimizeResult r = bfgs_minimize(obj, x0, opt.minimize);
    if (std::isfinite(r.f) && r.f < best_obj) {
      best_obj = r.f;
      best.params = unpack(r.x, spec);
      best.grad_norm = r.grad_norm;
      best.iterations = r.iterations;
      best.converged = r.converged;
    }
  }
  if (!std::isfinite(best_obj)) throw Error(Errc::NonConvergence, "no start produced a finite likelihood");
  double s2 = 1.0;
  arma_profile_loglik(y, best.params, weights, opt.likelihood, &s2);
  best.params.sigma2 = s2;
  best.loglik = arma_loglik(y, best.params, weights, opt.likelihood);
  return best;
}

Params fit_mle(const Series& y, const ArmaSpec& spec, const Eigen::VectorXd& weights, const FitOptions& opt) {
  ArmaFit f = fit_mle_detailed(y.values, spec, weights, opt);
  if (!f.converged && opt.require_convergence) {
    std::ostringstream os;
    os << y.name << ": best point alpha=" << f.params.alpha << " phi=" << f.params.phi.transpose()
       << " theta=" << f.params.theta.transpose() << " gradient norm " << f.grad_norm;
    throw Error(Errc::NonConvergence, os.str());
  }
  return f.params;
}

Eigen::VectorXd filter_residuals(const Series& y, const Params& par, Likelihood lik) {
  return run_filter(y.values, par, lik).innovations;
}

ForecastPath forecast_iterative(const Params& par, const Eigen::VectorXd& last_y, const Eigen::VectorXd& last_eps,
                                int H, MonthDate origin) {
  const auto p = par.phi.size();
  const auto q = par.theta.size();
  if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be at least 1");
  if (last_y.size() < p || last_eps.size() < q)
    throw Error(Errc::InvalidArgument, "not enough initial conditions for the forecast recursion");

  // hist holds y_{T-p+1..T} followed by forecasts.
  Eigen::VectorXd hist(p + H);
  hist.head(p) = last_y.tail(p);
  ForecastPath out{origin, Eigen::VectorXd(H)};
  for (int h = 1; h <= H; ++h) {
    double v = par.alpha;
    for (Eigen::Index i = 0; i < p; ++i) v += par.phi(i) * hist(p + h - 2 - i);
    if (h == 1)
      for (Eigen::Index j = 0; j < q; ++j) v += par.theta(j) * last_eps(last_eps.size() - 1 - j);
    hist(p + h - 1) = v;
    out.values(h - 1) = v;
  }
  return out;
}

ForecastPath forecast_iterative(const Params& par, double y_T, double eps_T, int H, MonthDate origin) {
  return forecast_iterative(par, Eigen::VectorXd::Constant(std::max<Eigen::Index>(1, par.phi.size()), y_T),
                            Eigen::VectorXd::Constant(std::max<Eigen::Index>(1, par.theta.size()), eps_T), H, origin);
}

ForecastPath forecast_from_history(const Params& par, const Series& history, int H, Likelihood lik) {
  const Eigen::VectorXd eps = filter_residuals(history, par, lik);
  const auto p = par.phi.size();
  const auto q = par.theta.size();
  if (history.size() < std::max(p, q))
    throw Error(Errc::InsufficientHistory, history.name + ": too short to initialise the forecast");
  return forecast_iterative(par, history.values.tail(p), eps.tail(q), H, history.end());
}

Eigen::VectorXd simulate_arma(const Params& par, int n, std::uint64_t seed, int burn) {
  const auto p = par.phi.size();
  const auto q = par.theta.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double sd = std::sqrt(par.sigma2);
  const double mu = par.mean();
  const int total = n + burn;
  Eigen::VectorXd y = Eigen::VectorXd::Constant(total + p, mu);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(total + q);
  for (int t = 0; t < total; ++t) {
    const double eps = sd * nd(rng);
    double v = par.alpha + eps;
    for (Eigen::Index i = 0; i < p; ++i) v += par.phi(i) * y(p + t - 1 - i);
    for (Eigen::Index j = 0; j < q; ++j) v += par.theta(j) * e(q + t - 1 - j);
    y(p + t) = v;
    e(q + t) = eps;
  }
  return y.tail(n);
}

}  // namespace regimecast
