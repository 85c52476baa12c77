#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "regimecast/regime.hpp"

namespace regimecast {

namespace {

using Vec5 = Eigen::Matrix<double, kTvpDim, 1>;
using Mat5 = Eigen::Matrix<double, kTvpDim, kTvpDim>;

Vec5 regressors(const Eigen::VectorXd& y, Eigen::Index t) {
  Vec5 x;
  x(0) = 1.0;
  for (int i = 1; i <= kTvpLags; ++i) x(i) = y(t - i);
  return x;
}

}  // namespace

OlsAr ols_ar4(const Series& y, MonthDate from, MonthDate to) {
  const Eigen::Index i0 = std::max<Eigen::Index>(y.index_of(from), kTvpLags);
  const Eigen::Index i1 = y.index_of(to);
  const Eigen::Index n = i1 - i0 + 1;
  if (n <= 2 * kTvpDim) throw Error(Errc::InsufficientHistory, y.name + ": AR(4) OLS window too short");
  Eigen::MatrixXd X(n, kTvpDim);
  Eigen::VectorXd Y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    X.row(k) = regressors(y.values, i0 + k).transpose();
    Y(k) = y.values(i0 + k);
  }
  OlsAr out;
  const Mat5 XtX = X.transpose() * X;
  const Eigen::LDLT<Mat5> ldlt(XtX);
  out.coef = ldlt.solve(X.transpose() * Y);
  const Eigen::VectorXd e = Y - X * out.coef;
  out.resid_var = e.squaredNorm() / static_cast<double>(n - kTvpDim);
  out.cov = out.resid_var * ldlt.solve(Mat5::Identity());
  return out;
}

template <typename Scalar>
void tvp_step(TvpState<Scalar>& st, const Eigen::Matrix<Scalar, kTvpDim, 1>& x, Scalar y,
              const Eigen::Matrix<Scalar, kTvpDim, kTvpDim>& Q, Scalar* min_eig) {
  using M = Eigen::Matrix<Scalar, kTvpDim, kTvpDim>;
  // predict: beta_t|t-1 = beta_t-1|t-1, P_t|t-1 = P + Q
  M P = st.cov + Q;
  const Scalar f = x.dot(P * x) + st.meas_var;
  const Eigen::Matrix<Scalar, kTvpDim, 1> K = P * x / f;
  st.beta += K * (y - x.dot(st.beta));
  // Joseph form keeps the update PSD up to rounding.
  const M A = M::Identity() - K * x.transpose();
  P = A * P * A.transpose() + st.meas_var * K * K.transpose();
  if (min_eig) {
    const Scalar lo = Eigen::SelfAdjointEigenSolver<M>(P, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    *min_eig = std::min(*min_eig, lo);
  }
  st.cov = Scalar(0.5) * (P + P.transpose());
}

template void tvp_step(TvpState<double>&, const Vec5&, double, const Mat5&, double*);

namespace {

TvpState<double> tvp_prior(const Series& y, MonthDate break_date, const TvpOptions& opt) {
  const OlsAr prior = ols_ar4(y, std::max(opt.prior_start, y.start), std::min(opt.prior_end, y.end()));
  const OlsAr pre = ols_ar4(y, y.start, break_date - 1);
  TvpState<double> st;
  st.beta = prior.coef;
  st.cov = opt.prior_cov_scale * prior.cov;
  st.meas_var = pre.resid_var;
  return st;
}

}  // namespace

TvpRun run_tvp(const Series& y, MonthDate break_date, double q_scale, const TvpOptions& opt) {
  if (!y.contains(break_date)) throw Error(Errc::OutOfRange, "break date outside the sample");
  if (!(q_scale >= 0.0)) throw Error(Errc::InvalidArgument, "q_scale must be non-negative");
  TvpRun run;
  run.state = tvp_prior(y, break_date, opt);
  run.first_filtered = y.start + kTvpLags;
  run.one_step.resize(y.size() - kTvpLags);
  run.min_eigenvalue = std::numeric_limits<double>::infinity();
  const Mat5 Qon = q_scale * Mat5::Identity();
  const Mat5 Qoff = Mat5::Zero();
  for (Eigen::Index t = kTvpLags; t < y.size(); ++t) {
    const Vec5 x = regressors(y.values, t);
    run.one_step(t - kTvpLags) = x.dot(run.state.beta);
    tvp_step<double>(run.state, x, y.values(t), y.date_at(t) >= break_date ? Qon : Qoff, &run.min_eigenvalue);
  }
  return run;
}

ForecastPath fit_forecast_tvp(const Series& y, MonthDate break_date, double q_scale, int H, const TvpOptions& opt) {
  if (H < 1) throw Error(Errc::InvalidArgument, "horizon must be at least 1");
  const TvpRun run = run_tvp(y, break_date, q_scale, opt);
  Eigen::VectorXd hist(kTvpLags + H);
  hist.head(kTvpLags) = y.values.tail(kTvpLags);
  ForecastPath out{y.end(), Eigen::VectorXd(H)};
  for (int h = 0; h < H; ++h) {
    double v = run.state.beta(0);
    for (int i = 1; i <= kTvpLags; ++i) v += run.state.beta(i) * hist(kTvpLags + h - i);
    hist(kTvpLags + h) = v;
    out.values(h) = v;
  }
  return out;
}

ForecastPath tvp_recursive_one_step(const Series& extended, MonthDate origin, MonthDate break_date, double q_scale,
                                    const TvpOptions& opt) {
  if (!extended.contains(origin) || origin == extended.end())
    throw Error(Errc::OutOfRange, "no months after the origin to forecast");
  // The prior and measurement variance use only information up to the origin.
  const Series known = slice(extended, extended.start, origin);
  const TvpRun base = run_tvp(known, break_date, q_scale, opt);
  TvpState<double> st = base.state;
  const int H = extended.end() - origin;
  ForecastPath out{origin, Eigen::VectorXd(H)};
  const Mat5 Qon = q_scale * Mat5::Identity();
  for (int h = 1; h <= H; ++h) {
    const Eigen::Index t = extended.index_of(origin + h);
    const Vec5 x = regressors(extended.values, t);
    out.values(h - 1) = x.dot(st.beta);
    tvp_step<double>(st, x, extended.values(t), extended.date_at(t) >= break_date ? Qon : Mat5::Zero());
  }
  return out;
}

}  // namespace regimecast
