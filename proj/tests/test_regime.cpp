#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "oracles.hpp"
#include "regimecast/regime.hpp"

using namespace regimecast;

namespace {

MsArParams<double> two_regimes() {
  MsArParams<double> p;
  p.alpha << 0.4, 2.5;
  p.rho << 0.6, 0.75;
  p.sigma << 0.8, 1.6;
  p.P << 0.95, 0.05, 0.10, 0.90;
  return p;
}

}  // namespace

TEST_SUITE("regime") {
  TEST_CASE("Hamilton filter matches enumeration over regime paths") {
    const auto par = two_regimes();
    const Eigen::Vector4d y(1.0, 3.2, 9.0, 8.1);
    const auto hf = hamilton_filter<double>(y, par);
    REQUIRE(hf.filtered.rows() == 3);
    const auto e = oracles::enumerate_regimes(y, par);
    CHECK((hf.filtered - e.filtered).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(hf.loglik - e.loglik) < 1e-10);
    CHECK((hf.filtered.array() >= 0).all());
    CHECK((hf.filtered.array() <= 1).all());
    CHECK((hf.filtered.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  }

  TEST_CASE("ergodic distribution is invariant") {
    const auto par = two_regimes();
    const Eigen::Vector2d pi = par.ergodic();
    CHECK((par.P.transpose() * pi - pi).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(pi(0) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("identical regimes reduce to an AR(1) forecast") {
    MsArParams<double> par;
    par.alpha << 1.0, 1.0;
    par.rho << 0.7, 0.7;
    par.sigma << 1.0, 1.0;
    par.P << 0.8, 0.2, 0.3, 0.7;
    const auto f = forecast_msar(par, Eigen::Vector2d(0.4, 0.6), 5.0, 12);
    double y = 5.0;
    for (int h = 0; h < 12; ++h) {
      y = 1.0 + 0.7 * y;
      CHECK(f.values(h) == doctest::Approx(y).epsilon(1e-12));
    }
  }

  TEST_CASE("absorbing regime") {
    auto par = two_regimes();
    par.P << 1.0, 0.0, 0.0, 1.0;
    const auto f = forecast_msar(par, Eigen::Vector2d(0.0, 1.0), 3.0, 24);
    const double mean_high = par.means()(1);
    CHECK(f.values(0) == doctest::Approx(2.5 + 0.75 * 3.0));
    CHECK(std::abs(f.values(23) - mean_high) < std::pow(0.75, 24) * std::abs(3.0 - mean_high) + 1e-9);
  }

  TEST_CASE("recursive forecast equals enumeration") {
    const auto par = two_regimes();
    for (const Eigen::Vector2d xi : {Eigen::Vector2d(0.3, 0.7), Eigen::Vector2d(1.0, 0.0)}) {
      const auto a = forecast_msar(par, xi, 4.2, 10);
      const auto b = forecast_msar_enumerate(par, xi, 4.2, 10);
      CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK_THROWS_AS(forecast_msar(par, Eigen::Vector2d(0.3, 0.3), 1.0, 3), Error);
  }

  TEST_CASE("MS-AR estimation recovers two separated regimes") {
    MsArParams<double> truth;
    truth.alpha << 0.5, 5.0;
    truth.rho << 0.5, 0.5;
    truth.sigma << 0.5, 0.5;
    truth.P << 0.97, 0.03, 0.05, 0.95;
    const auto [y, s] = simulate_msar(truth, 2000, 17, 0, 1.0);
    const Series ys{{1850, 1}, y, "sim"};
    MsArFitOptions opt;
    opt.restarts = 6;
    const MsArFit fit = fit_msar(ys, opt);
    const auto m = fit.params.means();
    CHECK(std::abs(m(0) - 1.0) < 0.1);
    CHECK(std::abs(m(1) - 10.0) < 0.1);
    // Filtered probability of the true state above 0.9 for at least 80% of dates.
    int hits = 0;
    for (Eigen::Index t = 1; t < y.size(); ++t) {
      const double p_high = fit.filtered_high(t - 1);
      hits += (s(t) == 1 ? p_high : 1.0 - p_high) > 0.9;
    }
    CHECK(hits >= 0.8 * (y.size() - 1));
  }

  TEST_CASE("TVP filter without drift equals the batch Bayesian posterior") {
    Series y{{1960, 1}, Eigen::VectorXd(240), "y"};
    {
      MsArParams<double> p = two_regimes();
      y.values = simulate_msar(p, 240, 3, 0, 1.0).first;
    }
    const MonthDate brk{1975, 1};
    TvpOptions opt;
    opt.prior_end = {1969, 12};
    const TvpRun run = run_tvp(y, brk, 0.0, opt);

    const OlsAr prior = ols_ar4(y, y.start, opt.prior_end);
    const OlsAr pre = ols_ar4(y, y.start, brk - 1);
    const Eigen::MatrixXd P0inv = (opt.prior_cov_scale * prior.cov).inverse();
    const double s2 = pre.resid_var;
    const int n = 240 - kTvpLags;
    Eigen::MatrixXd X(n, kTvpDim);
    Eigen::VectorXd Y(n);
    for (int t = kTvpLags; t < 240; ++t) {
      X(t - kTvpLags, 0) = 1.0;
      for (int i = 1; i <= kTvpLags; ++i) X(t - kTvpLags, i) = y.values(t - i);
      Y(t - kTvpLags) = y.values(t);
    }
    const Eigen::MatrixXd post_cov = (P0inv + X.transpose() * X / s2).inverse();
    const Eigen::VectorXd post_mean = post_cov * (P0inv * prior.coef + X.transpose() * Y / s2);
    CHECK((run.state.beta - post_mean).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + post_mean.cwiseAbs().maxCoeff()));
    CHECK((run.state.cov - post_cov).cwiseAbs().maxCoeff() < 1e-6 * post_cov.cwiseAbs().maxCoeff());
    CHECK(run.state.meas_var == doctest::Approx(s2));
    CHECK(run.min_eigenvalue >= -1e-10);
  }

  TEST_CASE("TVP forecasts") {
    Series y{{1960, 1}, simulate_msar(two_regimes(), 300, 8, 0, 1.0).first, "y"};
    const MonthDate brk{1980, 1};
    TvpOptions opt;
    opt.prior_end = {1975, 12};
    const TvpRun run = run_tvp(y, brk, 0.01, opt);
    CHECK(run.min_eigenvalue >= -1e-10);
    const auto f = fit_forecast_tvp(y, brk, 0.01, 6, opt);
    const Eigen::Index T = y.size() - 1;
    const double f1 = run.state.beta(0) + run.state.beta(1) * y.values(T) + run.state.beta(2) * y.values(T - 1) +
                      run.state.beta(3) * y.values(T - 2) + run.state.beta(4) * y.values(T - 3);
    CHECK(f.values(0) == doctest::Approx(f1));

    const MonthDate origin = y.end() - 12;
    const auto rec = tvp_recursive_one_step(y, origin, brk, 0.01, opt);
    CHECK(rec.horizon() == 12);
    const auto direct = fit_forecast_tvp(slice(y, y.start, origin), brk, 0.01, 1, opt);
    CHECK(rec.values(0) == doctest::Approx(direct.values(0)));
    CHECK_THROWS_AS(run_tvp(y, {2100, 1}, 0.01, opt), Error);
  }
}
