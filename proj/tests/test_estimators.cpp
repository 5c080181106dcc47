#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "renewrt/error.hpp"
#include "renewrt/estimators.hpp"

using namespace renewrt;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

MediumParams one_sided(double beta, double mu = 1.0, double theta = 0.0) {
  return {beta, mu, theta, std::nullopt};
}

// Left form of the normal-incidence estimate, independent of the oblique one.
double rho_hat_normal(double eta) {
  const double s = std::sqrt(2 * eta / (1 + 2 * eta));
  return (1 - s) * (1 + eta) / (1 + eta + s);
}

}  // namespace

TEST_CASE("one-sided estimate values") {
  CHECK(rho_hat_exponential(one_sided(1.0)) == doctest::Approx(0.13031).epsilon(1e-4));
  CHECK(rho_hat_exponential(one_sided(1.0)) == doctest::Approx(0.13030615433).epsilon(1e-10));
  CHECK(rho_hat_exponential(one_sided(0.25)) == doctest::Approx(0.289113790837).epsilon(1e-10));
  for (double deg : {0.0, 30.0, 80.0}) CHECK(rho_hat_exponential(one_sided(0.0, 1.0, deg * kDeg)) == 1.0);
}

TEST_CASE("upper bound values and refusal") {
  CHECK(rho_upper_exponential(one_sided(0.0)) == doctest::Approx(1.0));
  CHECK(rho_upper_exponential(one_sided(0.25)) == doctest::Approx(0.59753).epsilon(1e-5));
  CHECK_THROWS_AS(rho_upper_exponential(one_sided(0.5)), ValidityError);
  CHECK_THROWS_AS(rho_upper_exponential(one_sided(0.1, 1.0, 0.2)), ValidityError);
  try {
    rho_upper_exponential(one_sided(2.0));
    FAIL("expected a refusal");
  } catch (const ValidityError& e) {
    CHECK(std::string(e.what()).find("mu > 2*beta") != std::string::npos);
    CHECK(std::string(e.what()).find("lambda > 4*pi*k*L") != std::string::npos);
  }
  const auto r = estimate_one_sided(one_sided(1.0));
  CHECK_FALSE(r.upper_valid);
  CHECK(r.near_field_required);
  CHECK_FALSE(r.rho_upper);
}

TEST_CASE("estimate stays below the bound in the near field") {
  for (double eta : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45})
    CHECK(rho_hat_exponential(one_sided(eta)) <= rho_upper_exponential(one_sided(eta)));
}

TEST_CASE("monotone in eta, limits, angle consistency") {
  double prev = 2.0;
  for (int i = 0; i <= 100; ++i) {
    const double eta = 0.05 * i;
    const double v = rho_hat_exponential(one_sided(eta));
    CHECK(v < prev);
    prev = v;
    CHECK(v == doctest::Approx(rho_hat_normal(eta)).epsilon(1e-15));
  }
  CHECK(rho_hat_exponential(one_sided(1e-12)) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(rho_hat_exponential(one_sided(1e3)) < 5e-4);
  CHECK(rho_hat_exponential(one_sided(0.3, 1.0, 60 * kDeg)) > rho_hat_exponential(one_sided(0.3)));
}

TEST_CASE("delta correction") {
  const auto e1 = StepDistribution::exponential(1.0);
  CHECK(delta_correction(e1, 1.0, 1e-6) == doctest::Approx(1.0 + 1.0 / ((2e-6 + 1) * (1e-6 + 1))).epsilon(1e-9));
  CHECK(std::abs(delta_correction(e1, 1.0, 1e-6) - 2.0) < 1e-5);
  CHECK(delta_correction(e1, 0.0, 0.3) == 1.0);
  CHECK(delta_correction(StepDistribution::exponential(2.0), 1.0, 0.5) == doctest::Approx(1.16667).epsilon(1e-5));
  CHECK(delta_correction_limit(StepDistribution::exponential(4.0), 1.0) == doctest::Approx(1.25));
  CHECK_THROWS_AS(delta_correction(e1, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(delta_correction(e1, 1.0, -1.0), InvalidArgument);
}

TEST_CASE("general estimate reduces to the exponential one") {
  for (double mu : {0.5, 1.0, 4.0})
    for (double eta : {0.0, 0.01, 0.3, 1.0, 5.0})
      for (double deg : {0.0, 45.0, 75.0}) {
        const double beta = eta * mu;
        const double general = rho_hat_general(StepDistribution::exponential(mu), beta, deg * kDeg);
        CHECK(std::abs(general - rho_hat_exponential(one_sided(beta, mu, deg * kDeg))) < 1e-12);
        Eigen::VectorXd w(1), r(1);
        w << 1.0;
        r << mu;
        CHECK(rho_hat_general(StepDistribution::hyperexponential(w, r), beta, deg * kDeg) == general);
      }
}

TEST_CASE("general estimate with a mixture is a valid reflectivity") {
  Eigen::VectorXd w(2), r(2);
  w << 0.5, 0.5;
  r << 1.0, 3.0;
  const auto d = StepDistribution::hyperexponential(w, r);
  double prev = 1.0;
  for (double beta : {0.0, 0.1, 0.5, 2.0}) {
    const double v = rho_hat_general(d, beta, 0.0);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(rho_hat_general(d, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // A finite step tends to the limit.
  CHECK(rho_hat_general(d, 0.5, 0.0, 1e-7) == doctest::Approx(rho_hat_general(d, 0.5, 0.0)).epsilon(1e-5));
}

TEST_CASE("two-sided closed form") {
  CHECK(rho_two_sided(1.0, 2.0, 0.0) == 0.5);
  CHECK(rho_two_sided(2.0, 2.0, 60 * kDeg) == doctest::Approx(0.749972).epsilon(1e-6));
  CHECK(rho_two_sided(1.0, 4.0, 60 * kDeg) == doctest::Approx((0.5 * (1 - std::exp(-8.0)) + 4.0) / 6.0));
  // Thin beds: rho ~ h mu / (2 cos theta).
  for (double deg : {0.0, 40.0, 89.0})
    CHECK(rho_two_sided(1.0, 1e-9, deg * kDeg) == doctest::Approx(1e-9 / (2 * std::cos(deg * kDeg))).epsilon(1e-6));
  for (double hmu : {0.1, 1.0, 7.0, 300.0}) CHECK(rho_two_sided(1.0, hmu, 0.0) == hmu / (hmu + 2.0));
  double prev = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double v = rho_two_sided(1.3, 0.05 * i, 35 * kDeg);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(tau_two_sided(1.0, 2.0, 0.0) == 0.5);
}

TEST_CASE("exit probability from the overshoot means") {
  const double mu = 2.0, h = 3.0;
  CHECK(rho_two_sided_from_overshoots(h, h, 1 / mu, 1 / mu, 0.0) == doctest::Approx((1 / mu) / (2 / mu + h)));
  CHECK(rho_two_sided_from_overshoots(0.0, h, 1 / mu, 1 / mu, 0.0) == doctest::Approx((h + 1 / mu) / (h + 2 / mu)));
  CHECK_THROWS_AS(rho_two_sided_from_overshoots(3.1, h, 1 / mu, 1 / mu, 0.0), InvalidArgument);
  CHECK_NOTHROW(rho_two_sided_from_overshoots(3.1, h, 1 / mu, 1 / mu, 30 * kDeg));
}

TEST_CASE("integrating the exit probability over the first depth gives the closed form") {
  CounterRng rng(2024, 1);
  for (int i = 0; i < 10; ++i) {
    const double mu = 0.2 + 3.0 * rng.uniform();
    const double h = (0.05 + 30.0 * rng.uniform()) / mu;
    const double theta = 85.0 * kDeg * rng.uniform();
    const double reach = h / std::cos(theta);
    auto f = [&](double x) {
      return mu * std::exp(-mu * x) * rho_two_sided_from_overshoots(x, h, 1 / mu, 1 / mu, theta);
    };
    const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, reach, 15, 1e-14);
    CHECK(std::abs(q - rho_two_sided(mu, h, theta)) < 1e-10);
  }
}

TEST_CASE("near-field condition") {
  CHECK(near_field_validity(0.0, 1.0, 1e-9));
  CHECK(near_field_validity(1.0, 1.0, 4 * std::numbers::pi + 0.1));
  CHECK_FALSE(near_field_validity(1.0, 1.0, 4 * std::numbers::pi - 0.1));
  // Same inequality as the bound's refusal, with beta = 2 pi k / lambda.
  for (double mu : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double k = 0.3, lambda = 1.0;
    const double beta = 2 * std::numbers::pi * k / lambda;
    bool bound_ok = true;
    try {
      rho_upper_exponential(one_sided(beta, mu));
    } catch (const ValidityError&) {
      bound_ok = false;
    }
    CHECK(near_field_validity(k, lambda, mu) == bound_ok);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(rho_hat_exponential(one_sided(-1.0)), InvalidArgument);
  CHECK_THROWS_AS(rho_hat_exponential(one_sided(1.0, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(rho_hat_exponential(one_sided(1.0, 1.0, std::numbers::pi / 2)), InvalidArgument);
  CHECK_THROWS_AS(rho_two_sided(1.0, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rho_hat_exponential({1.0, 1.0, 0.0, 2.0}), InvalidArgument);
}
