#include "renewrt/pack_free.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renewrt/error.hpp"
#include "renewrt/parallel.hpp"

namespace renewrt {

TallySums& TallySums::operator+=(const TallySums& o) {
  rays += o.rays;
  reflected += o.reflected;
  reflected_sq += o.reflected_sq;
  transmitted += o.transmitted;
  absorbed += o.absorbed;
  censored += o.censored;
  return *this;
}

TallyResult finalize(const TallySums& s) {
  TallyResult r;
  r.n_rays = s.rays;
  r.censored = s.censored;
  if (s.rays == 0) return r;
  const double n = static_cast<double>(s.rays);
  r.rho = s.reflected / n;
  r.tau = s.transmitted / n;
  r.absorbed = s.absorbed / n;
  if (s.rays > 1) {
    const double var = std::max(0.0, (s.reflected_sq - n * r.rho * r.rho) / (n - 1.0));
    r.rho_stderr = std::sqrt(var / n);
  }
  return r;
}

TallyResult merge_chunks(std::span<const TallySums> chunks) {
  TallySums total;
  for (const auto& c : chunks) total += c;
  return finalize(total);
}

namespace {

void validate_options(const SimulationOptions& opt) {
  detail::require(opt.rays >= 1, "number of rays must be >= 1");
  detail::require(opt.workers >= 1, "workers must be >= 1");
  detail::require(opt.weight_cutoff > 0.0 && opt.weight_cutoff < 1.0,
                  "weight cutoff must lie in (0, 1)");
}

}  // namespace

PackFreeRay trace_pack_free_one_sided(const MediumParams& m, const StepDistribution& dist,
                                      const SimulationOptions& opt, CounterRng& rng) {
  PackFreeRay ray;
  ray.first_flight = dist.sample(rng);
  WalkConfig cfg;
  cfg.start = ray.first_flight * std::cos(m.theta);
  cfg.up_probability = 0.5;
  cfg.step = dist;
  cfg.barrier = OneSided{};
  cfg.max_steps = opt.max_steps;
  // The exit weight is at most exp(-beta (x + travel before the last step)).
  cfg.travel_limit = m.beta > 0.0
                         ? std::max(0.0, -std::log(opt.weight_cutoff) / m.beta - ray.first_flight)
                         : std::numeric_limits<double>::infinity();
  ray.walk = sample_walk(cfg, rng);
  if (ray.walk.exited())
    ray.reflected_weight =
        std::exp(-m.beta * (ray.first_flight + ray.walk.travel - ray.walk.overshoot_below));
  return ray;
}

TallyResult simulate_1d_one_sided(const MediumParams& m, const StepDistribution& dist,
                                  const SimulationOptions& opt) {
  m.validate();
  detail::require(!m.height, "simulate_1d_one_sided needs a one-sided medium");
  validate_options(opt);
  auto chunks = run_chunked<TallySums>(
      opt.rays, opt.seed, opt.workers,
      [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
        TallySums sums;
        for (std::uint64_t i = first; i < last; ++i) {
          const PackFreeRay ray = trace_pack_free_one_sided(m, dist, opt, rng);
          if (ray.walk.status == WalkStatus::StepLimit) ++sums.censored;
          sums.add_ray(ray.reflected_weight, 0.0);
        }
        return sums;
      });
  return merge_chunks(chunks);
}

TallyResult simulate_1d_one_sided(const MediumParams& m, const SimulationOptions& opt) {
  return simulate_1d_one_sided(m, StepDistribution::exponential(m.mu), opt);
}

TallyResult simulate_1d_two_sided(const StepDistribution& dist, double height, double theta,
                                  const SimulationOptions& opt) {
  MediumParams m{0.0, 1.0, theta, height};
  m.validate();
  validate_options(opt);
  const double cos_t = std::cos(theta);
  auto chunks = run_chunked<TallySums>(
      opt.rays, opt.seed, opt.workers,
      [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
        TallySums sums;
        WalkConfig cfg;
        cfg.step = dist;
        cfg.barrier = TwoSided{height};
        cfg.max_steps = opt.max_steps;
        for (std::uint64_t i = first; i < last; ++i) {
          const double depth = dist.sample(rng) * cos_t;
          if (depth > height) {
            sums.add_ray(0.0, 1.0);
            continue;
          }
          cfg.start = depth;
          const WalkOutcome w = sample_walk(cfg, rng);
          if (!w.exited()) {
            ++sums.censored;
            sums.add_ray(0.0, 0.0);
          } else if (w.exit == ExitSide::Bottom) {
            sums.add_ray(1.0, 0.0);
          } else {
            sums.add_ray(0.0, 1.0);
          }
        }
        return sums;
      });
  return merge_chunks(chunks);
}

TallyResult simulate_1d_two_sided(double mu, double height, double theta,
                                  const SimulationOptions& opt) {
  return simulate_1d_two_sided(StepDistribution::exponential(mu), height, theta, opt);
}

WaldAudit wald_step_audit(const StepDistribution& dist, double beta, const SimulationOptions& opt) {
  detail::require(beta > 0.0, "the audit needs beta > 0");
  validate_options(opt);
  const double alpha = dist.laplace(2.0 * beta);
  const auto horizon = static_cast<std::uint64_t>(std::ceil(std::log(1e-17) / std::log(alpha)));

  struct Partial {
    double travel = 0.0;
    double steps = 0.0;
    std::uint64_t unfinished = 0;
  };
  auto chunks = run_chunked<Partial>(
      opt.rays, opt.seed, opt.workers,
      [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
        Partial p;
        WalkConfig cfg;
        cfg.step = dist;
        cfg.max_steps = std::min(horizon, opt.max_steps);
        for (std::uint64_t i = first; i < last; ++i) {
          cfg.start = dist.sample(rng);
          const WalkOutcome w = sample_walk(cfg, rng);
          if (!w.exited()) {
            ++p.unfinished;
            continue;
          }
          p.travel += std::exp(-2.0 * beta * w.travel);
          p.steps += std::pow(alpha, static_cast<double>(w.steps));
        }
        return p;
      });

  WaldAudit a;
  a.beta = beta;
  a.walks = opt.rays;
  for (const auto& c : chunks) {
    a.discounted_travel += c.travel;
    a.discounted_steps += c.steps;
    a.unfinished += c.unfinished;
  }
  a.discounted_travel /= static_cast<double>(opt.rays);
  a.discounted_steps /= static_cast<double>(opt.rays);
  a.relative_gap = std::abs(a.discounted_travel - a.discounted_steps) / a.discounted_steps;
  return a;
}

}  // namespace renewrt
