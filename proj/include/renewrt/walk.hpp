#pragma once

#include <cstdint>
#include <limits>
#include <variant>

#include "renewrt/rng.hpp"
#include "renewrt/step_distribution.hpp"

namespace renewrt {

inline constexpr std::uint64_t kDefaultMaxSteps = 10'000'000;

struct OneSided {};
struct TwoSided {
  double height;
};
using Barrier = std::variant<OneSided, TwoSided>;

/// Stopped random walk: starts at `start`, steps up with probability
/// `up_probability` by an F_y-distributed magnitude, stops below 0 (or above
/// the height for a two-sided barrier). A position landing exactly on a
/// barrier counts as an exit with zero overshoot.
struct WalkConfig {
  double start = 0.0;
  double up_probability = 0.5;
  StepDistribution step = StepDistribution::exponential(1.0);
  Barrier barrier = OneSided{};
  std::uint64_t max_steps = kDefaultMaxSteps;
  /// Stop early once the accumulated travel exceeds this; used by
  /// attenuating simulators whose remaining weight is then below cutoff.
  double travel_limit = std::numeric_limits<double>::infinity();

  void validate() const;
};

enum class ExitSide { Bottom, Top };

enum class WalkStatus {
  Exited,
  TravelLimit,  ///< stopped by WalkConfig::travel_limit before exiting
  StepLimit,    ///< censored by WalkConfig::max_steps
};

struct WalkOutcome {
  std::uint64_t steps = 0;
  double travel = 0.0;           ///< sum of step magnitudes up to the stop
  double overshoot_below = 0.0;  ///< Z-, distance below 0 at exit
  double overshoot_above = 0.0;  ///< Z+, distance above the height at exit
  ExitSide exit = ExitSide::Bottom;
  WalkStatus status = WalkStatus::Exited;

  bool exited() const { return status == WalkStatus::Exited; }
};

double sample_step(const StepDistribution& dist, CounterRng& rng);

WalkOutcome sample_walk(const WalkConfig& cfg, CounterRng& rng);

}  // namespace renewrt
