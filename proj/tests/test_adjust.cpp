#include <doctest.h>

#include <cmath>

#include "regimecast/adjust.hpp"

using namespace regimecast;

namespace {

Series simulated(const Params& par, int n, std::uint64_t seed, MonthDate start = {1960, 1}) {
  Series s;
  s.start = start;
  s.name = "sim";
  s.values = simulate_arma(par, n, seed);
  return s;
}

const Params kTruth = Params::arma11(0.5, 0.8, -0.3, 1.0);

}  // namespace

TEST_SUITE("adjust") {
  TEST_CASE("a one-origin robust correction is the single-origin correction") {
    const Series y = simulated(kTruth, 300, 1);
    const MonthDate tau{1975, 6};
    AdjustOptions opt;
    const ForecastPath base{y.end(), Eigen::VectorXd::LinSpaced(12, 1.0, 2.0)};
    const ForecastPath ic = intercept_correction(base, y, tau, {1, 1}, opt);
    const ForecastPath ric = robust_intercept_correction(base, y, {tau, tau}, tau, {1, 1}, opt);
    CHECK((ic.values - ric.values).cwiseAbs().maxCoeff() < 1e-9);

    const Params par = fit_mle(slice(y, y.start, tau), {1, 1});
    const CorrectionVector c = origin_errors(y, par, tau, 12, opt.estimation_start);
    CHECK((ic.values - (base.values + c.errors)).cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("corrections are additive in the baseline") {
    const Series y = simulated(kTruth, 300, 2);
    const ForecastPath a{y.end(), Eigen::VectorXd::Constant(12, 3.0)};
    const ForecastPath b{y.end(), Eigen::VectorXd::LinSpaced(12, -1.0, 4.0)};
    const Window w{{1970, 1}, {1972, 12}};
    const auto ra = robust_intercept_correction(a, y, w, {1969, 12}, {1, 1});
    const auto rb = robust_intercept_correction(b, y, w, {1969, 12}, {1, 1});
    CHECK(((ra.values - rb.values) - (a.values - b.values)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ra.origin == a.origin);
  }

  TEST_CASE("robust correction averages single-origin errors") {
    const Series y = simulated(kTruth, 200, 3);
    const Window w{{1965, 1}, {1965, 6}};
    const int H = 6;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(H);
    for (MonthDate tau = w.first; tau <= w.second; ++tau) sum += origin_errors(y, kTruth, tau, H, y.start).errors;
    const CorrectionVector avg = average_origin_errors(y, kTruth, w, H, y.start);
    CHECK((avg.errors - sum / 6.0).cwiseAbs().maxCoeff() < 1e-12);

    // Origins without H realized months are dropped from the average.
    const Window tail{y.end() - 8, y.end()};
    const CorrectionVector partial = average_origin_errors(y, kTruth, tail, H, y.start);
    const Eigen::VectorXd expect =
        (origin_errors(y, kTruth, y.end() - 8, H, y.start).errors + origin_errors(y, kTruth, y.end() - 7, H, y.start).errors +
         origin_errors(y, kTruth, y.end() - 6, H, y.start).errors) /
        3.0;
    CHECK((partial.errors - expect).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("origin errors match a direct computation") {
    const Series y = simulated(kTruth, 120, 4);
    const MonthDate tau = y.start + 80;
    const CorrectionVector c = origin_errors(y, kTruth, tau, 3, y.start);
    const Series hist = slice(y, y.start, tau);
    const Eigen::VectorXd eps = filter_residuals(hist, kTruth);
    const double f1 = 0.5 + 0.8 * hist.values(80) - 0.3 * eps(80);
    const double f2 = 0.5 + 0.8 * f1;
    CHECK(c.errors(0) == doctest::Approx(y.values(81) - f1));
    CHECK(c.errors(1) == doctest::Approx(y.values(82) - f2));
  }

  TEST_CASE("a similarity window spanning the sample is the unadjusted forecast") {
    const Series y = simulated(kTruth, 400, 5);
    Params fitted;
    const auto sim = similarity_forecast(y, {y.start, y.end()}, {1, 1}, y, 12, {}, &fitted);
    const Params par = fit_mle(y, {1, 1});
    const auto plain = forecast_from_history(par, y, 12);
    CHECK((sim.values - plain.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(fitted.phi(0) == doctest::Approx(par.phi(0)));
  }

  TEST_CASE("correction has zero mean one step ahead under the true model") {
    const Series y = simulated(kTruth, 2500, 6);
    const Window w{y.start + 100, y.start + 2400};
    const CorrectionVector c = average_origin_errors(y, kTruth, w, 1, y.start);
    CHECK(std::abs(c.errors(0)) < 4.0 / std::sqrt(2301.0));
  }

  TEST_CASE("precondition failures") {
    const Series y = simulated(kTruth, 200, 7);
    const ForecastPath base{y.end(), Eigen::VectorXd::Zero(12)};
    CHECK_THROWS_WITH_AS(intercept_correction(base, y, y.end() - 3, {1, 1}), doctest::Contains("InsufficientHistory"),
                         Error);
    CHECK_THROWS_WITH_AS(robust_intercept_correction(base, y, {y.end() - 5, y.end()}, y.end() - 100, {1, 1}),
                         doctest::Contains("InsufficientHistory"), Error);
    CHECK_THROWS_AS(robust_intercept_correction(base, y, {y.start + 50, y.start + 60}, y.start + 70, {1, 1}), Error);
  }
}
