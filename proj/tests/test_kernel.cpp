#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "regimecast/kernel.hpp"

using namespace regimecast;

TEST_SUITE("kernel") {
  TEST_CASE("weights are normalized and ESS is their inverse sum of squares") {
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(50, -3.0, 4.0);
    const auto kw = gaussian_weights<double>(z, 1.0, 0.7);
    CHECK(kw.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((kw.weights.array() >= 0).all());
    CHECK(kw.ess == doctest::Approx(1.0 / kw.weights.squaredNorm()));
    CHECK(kw.ess <= 50.0);
    Eigen::Index imax;
    kw.weights.maxCoeff(&imax);
    CHECK(std::abs(z(imax) - 1.0) < 0.1);
  }

  TEST_CASE("huge bandwidth gives flat weights") {
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(80, 0.0, 10.0);
    const auto kw = gaussian_weights<double>(z, 10.0, 1e9);
    CHECK((kw.weights.array() - 1.0 / 80).abs().maxCoeff() < 1e-12);
    CHECK(kw.ess == doctest::Approx(80.0));
  }

  TEST_CASE("two close states and one far state") {
    const Eigen::Vector3d z(0.0, 0.0, 10.0);
    const auto kw = gaussian_weights<double>(z, 0.0, 1.0);
    CHECK(kw.ess == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(kw.weights(2) < 1e-20);
  }

  TEST_CASE("weights are invariant to shifting the state") {
    const Eigen::Vector4d z(0.5, -1.25, 2.0, 0.75);
    const auto a = gaussian_weights<double>(z, 0.75, 1.5);
    const auto b = gaussian_weights<double>((z.array() + 8.0).matrix(), 8.75, 1.5);
    CHECK(a.weights == b.weights);
    CHECK(a.ess == b.ess);
  }

  TEST_CASE("errors") {
    const Eigen::Vector3d z(0.0, 1.0, 2.0);
    CHECK_THROWS_AS(gaussian_weights<double>(z, 0.0, 0.0), Error);
    CHECK_THROWS_WITH_AS(gaussian_weights<double>(z, 1e6, 1e-3), doctest::Contains("ZeroMass"), Error);
  }

  TEST_CASE("bandwidth grid") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0.0, 2.0);
    Eigen::VectorXd z(500);
    for (auto& v : z) v = nd(rng);
    const auto g = bandwidth_grid(z);
    REQUIRE(g.size() == 60);
    const double sd = std::sqrt((z.array() - z.mean()).square().sum() / 499.0);
    CHECK(g.front() == doctest::Approx(0.05 * sd));
    CHECK(g.back() == doctest::Approx(50.0 * sd));
    CHECK(g[1] / g[0] == doctest::Approx(g[59] / g[58]));
  }

  TEST_CASE("regime-aware selection on a two-state process") {
    // y switches between two AR(1) levels; z marks the state. The origin is in
    // the high state, so CV should prefer a bandwidth that isolates it.
    const int n = 300;
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd y(n), z(n);
    double prev = 0.0;
    for (int t = 0; t < n; ++t) {
      const bool high = (t >= 100 && t < 150) || t >= 250;
      z(t) = high ? 1.0 : 0.0;
      const double mu = high ? 6.0 : 0.0;
      prev = mu + 0.5 * (prev - mu) + nd(rng);
      y(t) = prev;
    }
    const std::vector<double> grid{0.1, 0.3, 1.0, 3.0, 100.0};
    const double b = select_bandwidth(y, z, 1.0, grid, 20.0, {1, 1});
    CHECK(b < grid.back());
    const auto scores = score_bandwidths(y, z, 1.0, grid, 20.0, {1, 1});
    const auto chosen = std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.bandwidth == b; });
    CHECK(chosen->cv < scores.back().cv);

    Series ys{{1990, 1}, y, "y"}, zs{{1990, 1}, z, "z"};
    const auto kf = kernel_forecast(ys, zs, b, ys, 12, {1, 1});
    CHECK(std::abs(kf.path.values(11) - 6.0) < 1.0);
  }

  TEST_CASE("a singleton grid returns its only point") {
    const Eigen::VectorXd y = simulate_arma(Params::arma11(0.5, 0.8, -0.3), 200, 3);
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(200, 0.0, 1.0);
    CHECK(select_bandwidth(y, z, 1.0, {0.7}, 30.0, {1, 1}) == 0.7);
    CHECK_THROWS_WITH_AS(select_bandwidth(y, z, 1.0, {0.7}, 500.0, {1, 1}), doctest::Contains("NoFeasibleBandwidth"),
                         Error);
    const auto scores = score_bandwidths(y, z, 1.0, {1e-4, 0.7}, 30.0, {1, 1});
    CHECK(std::isnan(scores[0].cv));
    CHECK(std::isfinite(scores[1].cv));
  }

  TEST_CASE("large bandwidth matches the unweighted fit") {
    const Params truth = Params::arma11(0.5, 0.8, -0.3);
    Series y{{1970, 1}, simulate_arma(truth, 400, 9), "y"};
    Series z{{1970, 1}, simulate_arma(Params::arma11(0.0, 0.9, 0.0), 400, 10), "z"};
    const auto kf = kernel_forecast(y, z, 1e7, y, 12, {1, 1});
    const auto plain = forecast_from_history(fit_mle(y, {1, 1}), y, 12);
    CHECK(std::abs(kf.path.average() - plain.average()) < 1e-3);
    CHECK_THROWS_AS(kernel_forecast(y, slice(z, z.start + 1, z.end()), 1.0, y, 12, {1, 1}), Error);
  }
}
