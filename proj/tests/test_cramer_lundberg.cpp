#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "renewrt/cramer_lundberg.hpp"
#include "renewrt/error.hpp"

using namespace renewrt;

namespace {

StepDistribution mix(double a0, double r0, double r1) {
  Eigen::VectorXd w(2), r(2);
  w << a0, 1.0 - a0;
  r << r0, r1;
  return StepDistribution::hyperexponential(w, r);
}

// Transform written out independently of the library.
double laplace(const StepDistribution& d, double v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.phases(); ++i) s += d.weights()[i] * d.rates()[i] / (d.rates()[i] + v);
  return s;
}

// Coefficients from the interpolation conditions sum_i c_i/(mu_j + gamma_i) = 1/(mu_j + zeta).
Eigen::VectorXd cauchy_coefficients(const StepDistribution& d, const Eigen::VectorXd& g, double zeta) {
  const Eigen::Index m = d.phases();
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) a(j, i) = 1.0 / (d.rates()[j] + g[i]);
    b[j] = 1.0 / (d.rates()[j] + zeta);
  }
  return a.fullPivLu().solve(b);
}

struct Sim {
  double mean;
  double se;
};

template <typename Fn>
Sim simulate(const WalkConfig& cfg, int n, std::uint64_t seed, Fn&& value) {
  CounterRng rng(seed, 0);
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = value(sample_walk(cfg, rng));
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

}  // namespace

TEST_CASE("exponential root has the closed form") {
  for (double alpha : {0.1, 0.5, 0.9, 1.0}) {
    const auto g = cramer_lundberg_roots(StepDistribution::exponential(1.0), 0.5, alpha);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(-std::sqrt(1.0 - alpha)).epsilon(1e-12));
  }
  const auto d = StepDistribution::exponential(3.0);
  const auto g = cramer_lundberg_roots(d, 0.5, 0.5);
  CHECK(g[0] == doctest::Approx(-3.0 * std::sqrt(0.5)).epsilon(1e-12));
  const double r = 0.5 * laplace(d, g[0]) + 0.5 * laplace(d, -g[0]) - 1.0 / 0.5;
  CHECK(std::abs(r) < 1e-12);
  CHECK(cramer_lundberg_roots(StepDistribution::exponential(1.0), 0.5, 1.0)[0] == 0.0);
}

TEST_CASE("mixture roots: m below zero, m above, all residuals small") {
  const auto d = mix(0.5, 1.0, 2.0);
  const auto roots = cramer_lundberg_solve(d, 0.5, 0.8);
  REQUIRE(roots.down.size() == 2);
  REQUIRE(roots.up.size() == 2);
  for (double g : roots.down) {
    CHECK(g <= 0.0);
    CHECK(std::abs(0.5 * laplace(d, g) + 0.5 * laplace(d, -g) - 1.25) < 1e-10);
  }
  for (double g : roots.up) CHECK(g >= 0.0);
  // p = 1/2 makes the equation even in gamma.
  CHECK(roots.up[0] == doctest::Approx(-roots.down[1]).epsilon(1e-10));
  CHECK(roots.down[0] < -d.rates()[0]);
  CHECK(roots.down[1] > -d.rates()[0]);
}

TEST_CASE("biased walk roots satisfy their own equation") {
  const auto d = mix(0.3, 0.5, 4.0);
  for (double p : {0.2, 0.7}) {
    const auto roots = cramer_lundberg_solve(d, p, 0.9);
    for (double g : roots.down)
      CHECK(std::abs(p * laplace(d, -g) + (1 - p) * laplace(d, g) - 1 / 0.9) < 1e-10);
    for (double g : roots.up)
      CHECK(std::abs(p * laplace(d, -g) + (1 - p) * laplace(d, g) - 1 / 0.9) < 1e-10);
  }
}

TEST_CASE("bad discounts are rejected") {
  const auto d = StepDistribution::exponential(1.0);
  CHECK_THROWS_AS(cramer_lundberg_roots(d, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(cramer_lundberg_roots(d, 0.5, 1.5), InvalidArgument);
  CHECK_THROWS_AS(cramer_lundberg_roots(d, 1.0, 0.5), InvalidArgument);
}

TEST_CASE("coefficient formula agrees with the interpolation system") {
  for (const auto& d : {mix(0.5, 1.0, 2.0), mix(0.2, 0.3, 5.0), StepDistribution::exponential(2.0)}) {
    for (double alpha : {0.3, 0.9}) {
      const auto g = cramer_lundberg_roots(d, 0.5, alpha);
      for (double zeta : {0.0, 0.7, 3.0}) {
        const Eigen::VectorXd c = one_sided_coefficients(d, g, zeta);
        const Eigen::VectorXd ref = cauchy_coefficients(d, g, zeta);
        CHECK((c - ref).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("coefficient derivative matches finite differences") {
  const auto d = mix(0.4, 1.0, 3.0);
  const auto g = cramer_lundberg_roots(d, 0.5, 0.7);
  const double h = 1e-6;
  const Eigen::VectorXd fd =
      (one_sided_coefficients(d, g, 0.5 + h) - one_sided_coefficients(d, g, 0.5 - h)) / (2 * h);
  CHECK((one_sided_coefficient_derivatives(d, g, 0.5) - fd).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("one-sided transform: closed-form values") {
  const auto d = StepDistribution::exponential(1.0);
  CHECK(mgf_one_sided(d, 0.0, 0.5, 0.0) == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
  CHECK(mgf_one_sided(d, 2.0, 0.5, 0.0) ==
        doctest::Approx((1.0 - std::sqrt(0.5)) * std::exp(-std::sqrt(0.5) * 2.0)).epsilon(1e-12));
  CHECK(mgf_one_sided(d, 2.0, 0.5, 0.0) == doctest::Approx(0.071207).epsilon(1e-5));
  // Exponential with zeta: c = (mu + gamma) / (mu + zeta).
  const double g = -std::sqrt(1 - 0.6);
  CHECK(mgf_one_sided(d, 1.3, 0.6, 2.0) == doctest::Approx((1 + g) / 3.0 * std::exp(1.3 * g)).epsilon(1e-12));
  for (const auto& dist : {d, mix(0.5, 1.0, 2.0)})
    for (double x : {0.0, 0.4, 5.0}) CHECK(mgf_one_sided(dist, x, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one-sided transform against simulated walks") {
  WalkConfig cfg;
  cfg.start = 1.0;
  cfg.max_steps = 200;  // 0.5^200 is negligible
  const Sim s = simulate(cfg, 1'000'000, 31, [](const WalkOutcome& w) {
    return w.exited() ? std::pow(0.5, double(w.steps)) : 0.0;
  });
  CHECK(std::abs(s.mean - mgf_one_sided(cfg.step, 1.0, 0.5, 0.0)) < 3.0 * s.se);

  cfg.step = mix(0.5, 1.0, 2.0);
  cfg.max_steps = 400;
  const Sim h = simulate(cfg, 500'000, 32, [](const WalkOutcome& w) {
    return w.exited() ? std::pow(0.8, double(w.steps)) * std::exp(-0.5 * w.overshoot_below) : 0.0;
  });
  CHECK(std::abs(h.mean - mgf_one_sided(cfg.step, 1.0, 0.8, 0.5)) < 3.0 * h.se);
}

TEST_CASE("empirical transform") {
  WalkOutcome a;
  a.steps = 1;
  std::vector<WalkOutcome> one{a};
  auto e = empirical_mgf(one, 0.5, 1.0);
  CHECK(e.estimate == 0.5);
  CHECK(e.standard_error == 0.0);

  WalkOutcome b;
  b.steps = 2;
  b.overshoot_below = std::log(2.0);
  std::vector<WalkOutcome> two(10, b);
  CHECK(empirical_mgf(two, 1.0, 1.0).estimate == doctest::Approx(0.5));

  WalkOutcome c;
  c.status = WalkStatus::StepLimit;
  two.push_back(c);
  e = empirical_mgf(two, 1.0, 1.0);
  CHECK(e.unfinished == 1);
  CHECK(e.estimate == doctest::Approx(5.0 / 11.0));
  CHECK_THROWS_AS(empirical_mgf(std::vector<WalkOutcome>{}, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("two-sided exit probability for exponential steps") {
  // Gambler's ruin with exponential overshoots: (h mu + 1 - mu x) / (h mu + 2).
  for (double mu : {0.5, 1.0, 3.0})
    for (double h : {0.5, 2.0, 7.0}) {
      const auto sol = two_sided_coefficients(StepDistribution::exponential(mu), h, 1.0, 0.0, 0.0, 1.0, 0.0);
      CHECK(sol.confluent);
      for (double x : {0.0, 0.3 * h, h}) {
        const double ref = (h * mu + 1.0 - mu * x) / (h * mu + 2.0);
        CHECK(sol.evaluate(x) == doctest::Approx(ref).epsilon(1e-10));
      }
      CHECK(sol.evaluate(h / 2) == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("mean overshoot below from the transform derivative") {
  const double mu = 2.0, h = 3.0, x = 1.0;
  const auto d = StepDistribution::exponential(mu);
  auto m = [&](double zeta) { return two_sided_coefficients(d, h, 1.0, zeta, 0.0, 1.0, 0.0).evaluate(x); };
  const double s = 1e-5;
  const double slope = (-3.0 * m(0.0) + 4.0 * m(s) - m(2 * s)) / (2 * s);
  CHECK(-slope / m(0.0) == doctest::Approx(1.0 / mu).epsilon(1e-6));
}

TEST_CASE("two-sided exits partition the walk") {
  const auto d = mix(0.3, 0.7, 2.5);
  for (double h : {0.5, 3.0}) {
    const auto bottom = two_sided_coefficients(d, h, 1.0, 0.0, 0.0, 1.0, 0.0);
    const auto top = two_sided_coefficients(d, h, 1.0, 0.0, 0.0, 0.0, 1.0);
    for (double x : {0.0, 0.2 * h, h}) CHECK(bottom.evaluate(x) + top.evaluate(x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bottom.max_residual < 1e-10);
  }
}

TEST_CASE("discounted two-sided transform against simulated walks") {
  for (const auto& d : {StepDistribution::exponential(1.0), mix(0.5, 1.0, 3.0)}) {
    const double h = 2.0, x = 0.7, alpha = 0.8, zeta = 0.5, xi = 1.0;
    const auto sol = two_sided_coefficients(d, h, alpha, zeta, xi, 1.0, 1.0);
    WalkConfig cfg;
    cfg.start = x;
    cfg.step = d;
    cfg.barrier = TwoSided{h};
    const Sim s = simulate(cfg, 400'000, 41, [&](const WalkOutcome& w) {
      const double disc = std::pow(alpha, double(w.steps));
      return w.exit == ExitSide::Bottom ? disc * std::exp(-zeta * w.overshoot_below)
                                        : disc * std::exp(-xi * w.overshoot_above);
    });
    CHECK(std::abs(s.mean - sol.evaluate(x)) < 3.0 * s.se);
  }
}

TEST_CASE("tall beds do not overflow") {
  const auto sol = two_sided_coefficients(StepDistribution::exponential(1.0), 800.0, 0.5, 0.0, 0.0, 1.0, 1.0);
  for (double x : {0.0, 400.0, 800.0}) CHECK(std::isfinite(sol.evaluate(x)));
  CHECK(sol.evaluate(400.0) < 1e-100);
  // The far barrier is out of reach: the one-sided value.
  CHECK(sol.evaluate(0.0) ==
        doctest::Approx(mgf_one_sided(StepDistribution::exponential(1.0), 0.0, 0.5, 0.0)).epsilon(1e-9));
}
