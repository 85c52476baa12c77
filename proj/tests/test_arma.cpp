#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "regimecast/arma.hpp"

using namespace regimecast;
using oracles::autocov;
using oracles::gaussian_logpdf;
using oracles::toeplitz;

namespace {

Params make(double alpha, std::vector<double> phi, std::vector<double> theta, double sigma2) {
  Params p;
  p.alpha = alpha;
  p.phi = Eigen::Map<Eigen::VectorXd>(phi.data(), static_cast<Eigen::Index>(phi.size()));
  p.theta = Eigen::Map<Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  p.sigma2 = sigma2;
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
}

}  // namespace

TEST_SUITE("arma") {
  TEST_CASE("Kalman innovations equal brute-force Gaussian conditioning") {
    for (const Params& par : {make(0.5, {0.8}, {-0.3}, 1.3), make(0.2, {0.5, 0.3}, {0.4}, 0.7),
                              make(-1.0, {0.6, -0.2, 0.1}, {0.2, 0.1}, 2.0)}) {
      const Eigen::Vector3d y(1.7, -0.4, 2.9);
      const auto c = oracles::gaussian_conditioning(y, par);
      const auto f = arma_filter<double>(y, par);
      CHECK((f.innovations - c.innovations).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((f.scale * par.sigma2 - c.variances).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(std::abs(arma_loglik(y, par) - c.loglik) < 1e-10);
      CHECK(f.min_cov_eigenvalue >= -1e-10);
    }
  }

  TEST_CASE("exact likelihood on a longer sample matches the joint density") {
    const Params par = make(1.0, {0.9}, {-0.5}, 0.8);
    const Eigen::VectorXd y = simulate_arma(par, 40, 7);
    const Eigen::MatrixXd G = toeplitz(autocov(par, 39), 40);
    CHECK(arma_loglik(y, par) == doctest::Approx(gaussian_logpdf(y.array() - par.mean(), G)).epsilon(1e-10));
  }

  TEST_CASE("conditional sum of squares recursion") {
    const Params par = make(1.0, {0.5}, {0.5}, 1.0);
    const Eigen::Vector4d y(2.0, 3.0, 1.0, 2.0);
    const auto f = arma_css_filter<double>(y, par);
    // predictions 2, 3 and 0.5 for the last three observations
    CHECK(f.innovations(0) == 0.0);
    CHECK(f.scale(0) == 0.0);
    CHECK(f.innovations(1) == doctest::Approx(1.0));
    CHECK(f.innovations(2) == doctest::Approx(-2.0));
    CHECK(f.innovations(3) == doctest::Approx(1.5));
    const double ss = 1.0 + 4.0 + 2.25;
    CHECK(arma_loglik(y, par, {}, Likelihood::conditional) ==
          doctest::Approx(-0.5 * (3 * std::log(2 * M_PI) + ss)));
  }

  TEST_CASE("white noise has unit-scale innovations around the mean") {
    const Params par = make(3.0, {}, {}, 2.0);
    const Eigen::VectorXd y = simulate_arma(par, 20, 3);
    const auto f = arma_filter<double>(y, par);
    CHECK((f.innovations.array() - (y.array() - 3.0)).abs().maxCoeff() < 1e-12);
    CHECK((f.scale.array() - 1.0).abs().maxCoeff() < 1e-12);
  }

  TEST_CASE("forecasts") {
    const Params par = make(0.5, {0.8}, {-0.3}, 1.0);
    const auto one = forecast_iterative(par, 4.0, 1.0, 3);
    CHECK(one.values(0) == doctest::Approx(0.5 + 3.2 - 0.3));
    CHECK(one.values(1) == doctest::Approx(0.5 + 0.8 * 3.4));
    const auto far = forecast_iterative(par, 4.0, 1.0, 400);
    CHECK(far.values(399) == doctest::Approx(par.mean()).epsilon(1e-9));
    const auto at_mean = forecast_iterative(par, par.mean(), 0.0, 12);
    CHECK((at_mean.values.array() - par.mean()).abs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(forecast_iterative(par, 0.0, 0.0, 0), Error);

    Series hist;
    hist.start = {2000, 1};
    hist.values = simulate_arma(par, 60, 11);
    const auto path = forecast_from_history(par, hist, 12);
    CHECK(path.origin == MonthDate(2004, 12));
    CHECK(path.horizon() == 12);
    const Eigen::VectorXd e = filter_residuals(hist, par);
    CHECK(path.values(0) == doctest::Approx(0.5 + 0.8 * hist.values(59) - 0.3 * e(59)));
  }

  TEST_CASE("PACF reparameterisation") {
    const Eigen::Vector3d u(0.7, -1.2, 0.3);
    const Eigen::VectorXd phi = pacf_to_coeffs(u);
    Params p = make(0, {}, {}, 1);
    p.phi = phi;
    CHECK(p.stationary());
    CHECK((coeffs_to_pacf(phi) - u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(pacf_to_coeffs(Eigen::VectorXd::Constant(1, 0.5))(0) == doctest::Approx(std::tanh(0.5)));
  }

  TEST_CASE("maximum likelihood recovers ARMA(1,1) parameters") {
    // The intercept has a sampling sd near 0.04 at 5000 draws, so the
    // tolerance is applied to the average over four independent samples.
    const Params truth = make(0.49, {0.86}, {-0.44}, 4.0);
    Eigen::Vector4d mean_est = Eigen::Vector4d::Zero();
    Eigen::VectorXd y;
    ArmaFit fit;
    for (std::uint64_t seed : {2024, 2025, 2026, 2027}) {
      y = simulate_arma(truth, 5000, seed);
      fit = fit_mle_detailed(y, {1, 1});
      CHECK(fit.converged);
      CHECK(fit.grad_norm < 1e-4);
      const Eigen::Vector4d est(fit.params.alpha, fit.params.phi(0), fit.params.theta(0), std::sqrt(fit.params.sigma2));
      mean_est += est / 4.0;
    }
    CHECK(std::abs(mean_est(0) - 0.49) < 0.05);
    CHECK(std::abs(mean_est(1) - 0.86) < 0.05);
    CHECK(std::abs(mean_est(2) + 0.44) < 0.05);
    CHECK(std::abs(mean_est(3) - 2.0) < 0.05);

    // The fitted point is a stationary point of the profile likelihood in
    // the natural parameters as well.
    const Objective f = [&](const Eigen::VectorXd& x) {
      Params q = make(x(0), {x(1)}, {x(2)}, 1.0);
      return -arma_profile_loglik(y, q, {}, Likelihood::exact) / 5000.0;
    };
    const Eigen::Vector3d x(fit.params.alpha, fit.params.phi(0), fit.params.theta(0));
    CHECK(numeric_gradient(f, x).norm() < 1e-4);
  }

  TEST_CASE("uniform weights leave the estimate unchanged") {
    const Params truth = make(1.0, {0.6}, {0.2}, 1.0);
    const Eigen::VectorXd y = simulate_arma(truth, 400, 5);
    const ArmaFit a = fit_mle_detailed(y, {1, 1});
    const ArmaFit b = fit_mle_detailed(y, {1, 1}, Eigen::VectorXd::Constant(400, 1.0 / 400));
    CHECK(std::abs(a.params.alpha - b.params.alpha) < 1e-5);
    CHECK(std::abs(a.params.phi(0) - b.params.phi(0)) < 1e-5);
    CHECK(std::abs(a.params.theta(0) - b.params.theta(0)) < 1e-5);
  }

  TEST_CASE("conditional and exact fits agree on long samples") {
    const Params truth = make(0.5, {0.8}, {-0.3}, 1.0);
    const Eigen::VectorXd y = simulate_arma(truth, 3000, 99);
    FitOptions css;
    css.likelihood = Likelihood::conditional;
    const ArmaFit a = fit_mle_detailed(y, {1, 1});
    const ArmaFit b = fit_mle_detailed(y, {1, 1}, {}, css);
    CHECK(std::abs(a.params.phi(0) - b.params.phi(0)) < 0.01);
    CHECK(std::abs(a.params.theta(0) - b.params.theta(0)) < 0.01);
  }

  TEST_CASE("median error over 50 seeds") {
    const Params truth = make(0.5, {0.8}, {-0.3}, 1.0);
    std::vector<double> err_phi, err_theta;
    for (int s = 0; s < 50; ++s) {
      const Eigen::VectorXd y = simulate_arma(truth, 2000, 1000 + s);
      FitOptions opt;
      opt.restarts = 3;
      const ArmaFit fit = fit_mle_detailed(y, {1, 1}, {}, opt);
      err_phi.push_back(std::abs(fit.params.phi(0) - 0.8));
      err_theta.push_back(std::abs(fit.params.theta(0) + 0.3));
    }
    CHECK(median(err_phi) < 0.03);
    CHECK(median(err_theta) < 0.03);
  }

  TEST_CASE("input validation") {
    const Eigen::VectorXd short_y = Eigen::VectorXd::LinSpaced(30, 0, 1);
    CHECK_THROWS_WITH_AS(fit_mle_detailed(short_y, {1, 1}), doctest::Contains("TooShort"), Error);
    CHECK_THROWS_WITH_AS(fit_mle_detailed(Eigen::VectorXd::Constant(100, 2.0), {1, 1}),
                         doctest::Contains("DegenerateSample"), Error);
    CHECK_THROWS_AS(fit_mle_detailed(Eigen::VectorXd::LinSpaced(100, 0, 1), {1, 1}, Eigen::VectorXd::Ones(50)),
                    Error);
  }

  TEST_CASE("filter covariance stays positive semidefinite") {
    for (const Params& par : {make(0, {0.99}, {-0.98}, 1), make(0, {1.2, -0.35}, {0.9}, 1)}) {
      const Eigen::VectorXd y = simulate_arma(par, 200, 1);
      CHECK(arma_filter<double>(y, par).min_cov_eigenvalue >= -1e-10);
    }
  }
}
