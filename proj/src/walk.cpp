#include "renewrt/walk.hpp"

#include <cmath>

#include "renewrt/error.hpp"

namespace renewrt {

void WalkConfig::validate() const {
  detail::require(std::isfinite(start) && start >= 0.0, "walk start must be >= 0");
  detail::require(up_probability >= 0.0 && up_probability <= 1.0,
                  "up-step probability must lie in [0, 1]");
  detail::require(max_steps >= 1, "max_steps must be >= 1");
  detail::require(!(travel_limit < 0.0), "travel_limit must be >= 0");
  if (const auto* two = std::get_if<TwoSided>(&barrier)) {
    detail::require(two->height > 0.0, "two-sided height must be positive");
    detail::require(start <= two->height, "two-sided walk must start inside [0, h]");
  }
}

double sample_step(const StepDistribution& dist, CounterRng& rng) { return dist.sample(rng); }

WalkOutcome sample_walk(const WalkConfig& cfg, CounterRng& rng) {
  cfg.validate();
  const auto* two = std::get_if<TwoSided>(&cfg.barrier);
  const double top = two ? two->height : std::numeric_limits<double>::infinity();

  WalkOutcome out;
  double pos = cfg.start;
  while (out.steps < cfg.max_steps) {
    const bool up = rng.uniform() < cfg.up_probability;
    const double y = cfg.step.sample(rng);
    ++out.steps;
    out.travel += y;
    if (up) {
      pos += y;
      if (pos >= top) {
        out.overshoot_above = pos - top;
        out.exit = ExitSide::Top;
        return out;
      }
    } else {
      pos -= y;
      if (pos <= 0.0) {
        out.overshoot_below = -pos;
        out.exit = ExitSide::Bottom;
        return out;
      }
    }
    if (out.travel > cfg.travel_limit) {
      out.status = WalkStatus::TravelLimit;
      return out;
    }
  }
  out.status = WalkStatus::StepLimit;
  return out;
}

}  // namespace renewrt
