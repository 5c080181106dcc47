#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "renewrt/error.hpp"
#include "renewrt/fitting.hpp"
#include "renewrt/rng.hpp"

using namespace renewrt;
using namespace renewrt::fitting;

namespace {

std::vector<double> exp_samples(double mu, int n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.exponential(mu);
  return v;
}

}  // namespace

TEST_CASE("maximum likelihood rate") {
  CHECK(fit_mle(std::vector<double>{1.0, 2.0, 3.0}) == 0.5);
  const auto s = exp_samples(2.0, 1'000'000, 1);
  CHECK(std::abs(fit_mle(s) - 2.0) < 3.0 * 2.0 / 1000.0);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{1.0, -2.0}), InvalidArgument);
}

TEST_CASE("least squares recovers an exact exponential density") {
  std::vector<double> centers, density;
  for (int i = 0; i < 40; ++i) {
    const double c = 0.05 + 0.1 * i;
    centers.push_back(c);
    density.push_back(1.7 * std::exp(-1.7 * c));
  }
  CHECK(fit_least_squares_histogram(centers, density, 0.1, 10.0) == doctest::Approx(1.7).epsilon(1e-6));
  CHECK_THROWS_AS(fit_least_squares_histogram(centers, density, 2.0, 5.0), NumericalFailure);
  CHECK_THROWS_AS(fit_least_squares_histogram(centers, density, 5.0, 2.0), InvalidArgument);
}

TEST_CASE("least squares on sampled exponential paths") {
  const auto s = exp_samples(2.0, 1'000'000, 2);
  const double ls = fit_least_squares(s);
  CHECK(ls >= 1.9);
  CHECK(ls <= 2.1);
  CHECK_THROWS_AS(fit_least_squares(std::vector<double>(100, 0.7)), NumericalFailure);
  CHECK_THROWS_AS(fit_least_squares(s, 3), InvalidArgument);
}

TEST_CASE("density histogram") {
  const auto s = exp_samples(1.0, 100'000, 3);
  const Histogram h = density_histogram(s, 20);
  REQUIRE(h.edges.size() == 21);
  REQUIRE(h.centers.size() == 20);
  CHECK(h.edges.front() == 0.0);
  double mass = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(h.centers[k] == doctest::Approx(0.5 * (h.edges[k] + h.edges[k + 1])));
    mass += h.density[k] * (h.edges[k + 1] - h.edges[k]);
  }
  CHECK(mass == doctest::Approx(0.999).epsilon(1e-3));
}

TEST_CASE("Kolmogorov-Smirnov statistic") {
  const int n = 1000;
  std::vector<double> q;
  for (int i = 0; i < n; ++i) q.push_back(-std::log(1.0 - (i + 0.5) / n) / 3.0);
  CHECK(ks_statistic(q, 3.0) <= 0.5 / n + 1e-12);
  CHECK(ks_statistic(exp_samples(1.0, 10'000, 4), 1.0) < 0.0163);
  CHECK(ks_statistic(std::vector<double>(50, 1.0), 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(ks_statistic(std::vector<double>(50, 1.0), 1.0) > 0.3);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, 1.0), InvalidArgument);
}

TEST_CASE("the two rates agree on exponential data") {
  const auto s = exp_samples(0.8, 100'000, 5);
  const ExpFit f = fit_exponential(s);
  CHECK(f.n_samples == s.size());
  CHECK(std::abs(f.mu_ls - f.mu_mle) / f.mu_mle < 0.05);
  CHECK(f.ks_stat == ks_statistic(s, f.mu_mle));
  CHECK(f.histogram.centers.size() == 50);
}

TEST_CASE("fits are scale equivariant") {
  const auto s = exp_samples(1.3, 50'000, 6);
  std::vector<double> scaled;
  for (double x : s) scaled.push_back(4.0 * x);
  CHECK(fit_mle(scaled) == doctest::Approx(fit_mle(s) / 4.0).epsilon(1e-12));
  CHECK(fit_least_squares(scaled) == doctest::Approx(fit_least_squares(s) / 4.0).epsilon(1e-6));
  CHECK(ks_statistic(scaled, fit_mle(s) / 4.0) == doctest::Approx(ks_statistic(s, fit_mle(s))).epsilon(1e-9));
}

TEST_CASE("free path files") {
  const auto s = exp_samples(1.0, 1000, 7);
  std::stringstream io;
  write_samples(io, s);
  CHECK(read_samples(io) == s);

  std::istringstream commented("# free paths\n1.5\n\n  2.5 \n# end\n");
  CHECK(read_samples(commented) == std::vector<double>{1.5, 2.5});

  std::istringstream bad("1.0\n2.0\nabc\n");
  try {
    read_samples(bad);
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
