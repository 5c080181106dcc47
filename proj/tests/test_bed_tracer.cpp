#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "renewrt/bed.hpp"
#include "renewrt/error.hpp"
#include "renewrt/parallel.hpp"
#include "renewrt/tracer.hpp"

using namespace renewrt;
using namespace renewrt::mcrt;

namespace {

SimulationOptions options(std::uint64_t rays, std::uint64_t seed, unsigned workers = 1) {
  SimulationOptions o;
  o.rays = rays;
  o.seed = seed;
  o.workers = workers;
  return o;
}

BedSpec spec(double vf, double width, double depth, std::uint64_t seed = 3) {
  BedSpec s;
  s.radius = 1.0;
  s.volume_fraction = vf;
  s.width = width;
  s.depth = depth;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("empty bed transmits with Beer attenuation") {
  BedSpec s = spec(0.0, 20.0, 5.0);
  const BedGeometry bed = build_bed(s);
  CHECK(bed.centers().empty());
  TraceOptions t;
  t.beta = 0.3;
  t.theta = 40.0 * std::numbers::pi / 180.0;
  const auto r = simulate_2d(bed, t, options(1000, 1), 10);
  const double c = std::cos(t.theta);
  CHECK(r.tally.rho == 0.0);
  CHECK(r.tally.tau == doctest::Approx(std::exp(-0.3 * 5.0 / c)).epsilon(1e-12));
  CHECK(r.free_paths.empty());
  CHECK(r.first_flights.empty());

  // Flux along a single straight track: per-bin track length and the weight
  // crossing every lower edge.
  REQUIRE(r.flux.flux.size() == 10);
  for (std::size_t k = 0; k < 10; ++k) {
    const double a = r.flux.bin_edges[k], b = r.flux.bin_edges[k + 1];
    const double track = (std::exp(-0.3 * a / c) - std::exp(-0.3 * b / c)) / 0.3;
    CHECK(r.flux.flux[k] == doctest::Approx(track / (b - a)).epsilon(1e-10));
    CHECK(r.flux.net_upward[k] == doctest::Approx(std::exp(-0.3 * a / c)).epsilon(1e-10));
  }
}

TEST_CASE("bed generation is reproducible and keeps particles inside") {
  const BedSpec s = spec(0.3, 60.0, 12.0, 9);
  const BedGeometry a = build_bed(s), b = build_bed(s);
  CHECK(a.centers() == b.centers());
  CHECK(a.centers().size() == s.target_count());
  for (const auto& c : a.centers()) {
    CHECK(c.x() >= 0.0);
    CHECK(c.x() < 60.0);
    CHECK(c.y() >= 1.0);
    CHECK(c.y() < 12.0);
  }
  BedSpec other = s;
  other.seed = 10;
  CHECK(build_bed(other).centers() != a.centers());
  BedSpec fixed = s;
  fixed.count = 7;
  CHECK(build_bed(fixed).centers().size() == 7);
}

TEST_CASE("covered fraction matches the Boolean model away from the faces") {
  const BedSpec s = spec(0.3, 100.0, 100.0, 5);
  const BedGeometry bed = build_bed(s);
  CHECK(bed.center_density() * std::numbers::pi == doctest::Approx(-std::log(0.7)).epsilon(0.01));
  CounterRng rng(77, 0);
  const int n = 100'000;
  int hit = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p(100.0 * rng.uniform(), 2.0 + 97.0 * rng.uniform());
    if (bed.covered(p)) ++hit;
  }
  CHECK(std::abs(hit / double(n) - 0.3) < 0.02);
}

TEST_CASE("bed text round trip") {
  const BedGeometry a = build_bed(spec(0.2, 30.0, 8.0, 4));
  std::stringstream io;
  write_bed(io, a);
  const BedGeometry b = read_bed(io);
  CHECK(b.radius() == a.radius());
  CHECK(b.width() == a.width());
  CHECK(b.depth() == a.depth());
  CHECK(b.periodic() == a.periodic());
  CHECK(b.seed() == a.seed());
  CHECK(b.centers() == a.centers());
}

TEST_CASE("bed parse errors name the line") {
  std::istringstream bad_header("1 30 8 1\n");
  CHECK_THROWS_AS(read_bed(bad_header), InvalidArgument);
  std::istringstream bad_line("1 30 8 1 4\n2 3\n\n5 x\n");
  try {
    read_bed(bad_line);
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  std::istringstream outside("1 30 8 1 4\n2 9\n");
  CHECK_THROWS_AS(read_bed(outside), InvalidArgument);
}

TEST_CASE("ray against a single circle") {
  const BedGeometry bed(1.0, 10.0, 5.0, false, 0, {Eigen::Vector2d(5.0, 2.0)});
  const Eigen::Vector2d up(0.0, 1.0);
  auto h = bed.intersect({5.0, 0.0}, up, 10.0);
  REQUIRE(h);
  CHECK(h->t == doctest::Approx(1.0));
  CHECK(h->normal.y() == doctest::Approx(-1.0));
  h = bed.intersect({5.6, 0.0}, up, 10.0);
  REQUIRE(h);
  CHECK(h->t == doctest::Approx(1.2));
  CHECK(h->point.x() == doctest::Approx(5.6));
  CHECK_FALSE(bed.intersect({3.0, 0.0}, up, 10.0));
  CHECK_FALSE(bed.intersect({5.0, 0.0}, up, 0.5));
  const Eigen::Vector2d diag = Eigen::Vector2d(1.0, 1.0).normalized();
  h = bed.intersect({3.0, 0.0}, diag, 10.0);
  REQUIRE(h);
  CHECK((h->point - Eigen::Vector2d(5.0, 2.0)).norm() == doctest::Approx(1.0));
  CHECK(bed.covered({5.0, 2.5}));
  CHECK_FALSE(bed.covered({5.0, 3.5}));
}

TEST_CASE("periodic images are hit across the seam") {
  const BedGeometry bed(1.0, 10.0, 5.0, true, 0, {Eigen::Vector2d(0.5, 2.0)});
  const auto h = bed.intersect({9.8, 0.0}, {0.0, 1.0}, 10.0);
  REQUIRE(h);
  CHECK(h->t == doctest::Approx(2.0 - std::sqrt(1.0 - 0.49)));
  CHECK(bed.covered({9.9, 2.0}));
}

TEST_CASE("without dissipation every finished ray leaves with full weight") {
  const BedGeometry bed = build_bed(spec(0.5, 50.0, 10.0, 2));
  for (ScatterLaw law : {ScatterLaw::HemisphericUniform, ScatterLaw::LambertianCosine}) {
    TraceOptions t;
    t.beta = 0.0;
    t.law = law;
    const auto r = simulate_2d(bed, t, options(5000, 8));
    CHECK(r.tally.rho + r.tally.tau + static_cast<double>(r.tally.censored) / 5000.0 ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.tally.conservation_error()) < 1e-9);
    CHECK(r.tally.rho > 0.0);
    CHECK_FALSE(r.free_paths.empty());
    for (double p : r.free_paths) REQUIRE(p > 0.0);
  }
}

TEST_CASE("absorbing bed conserves energy") {
  const BedGeometry bed = build_bed(spec(0.2, 80.0, 15.0, 6));
  TraceOptions t;
  t.beta = 0.4;
  t.theta = 0.5;
  const auto r = simulate_2d(bed, t, options(20'000, 3));
  CHECK(std::abs(r.tally.conservation_error()) < 1e-9);
  CHECK(r.tally.absorbed > 0.0);
  CHECK(r.tally.censored == 0);
  CHECK(r.first_flights.size() <= 20'000);
}

TEST_CASE("2-D results do not depend on worker count") {
  const BedGeometry bed = build_bed(spec(0.3, 40.0, 10.0, 1));
  TraceOptions t;
  t.beta = 0.2;
  const auto a = simulate_2d(bed, t, options(3 * kChunkSize + 11, 5, 1));
  const auto b = simulate_2d(bed, t, options(3 * kChunkSize + 11, 5, 3));
  CHECK(a.tally.rho == b.tally.rho);
  CHECK(a.tally.tau == b.tally.tau);
  CHECK(a.free_paths == b.free_paths);
  CHECK(a.first_flights == b.first_flights);
  CHECK(a.flux.flux == b.flux.flux);
}

TEST_CASE("non-periodic beds censor sideways exits") {
  BedSpec s = spec(0.3, 10.0, 30.0, 2);
  s.periodic = false;
  TraceOptions t;
  t.beta = 0.0;
  const auto r = simulate_2d(build_bed(s), t, options(2000, 4));
  CHECK(r.tally.censored > 0);
  CHECK(std::abs(r.tally.conservation_error()) < 1e-9);
}

TEST_CASE("bed and trace validation") {
  CHECK_THROWS_AS(build_bed(spec(1.0, 20.0, 5.0)), InvalidArgument);
  CHECK_THROWS_AS(build_bed(spec(-0.1, 20.0, 5.0)), InvalidArgument);
  CHECK_THROWS_AS(build_bed(spec(0.2, 3.0, 5.0)), InvalidArgument);
  CHECK_THROWS_AS(build_bed(spec(0.2, 20.0, 0.5)), InvalidArgument);
  TraceOptions t;
  t.theta = std::numbers::pi / 2;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t.theta = 0.0;
  t.beta = -1.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
}
