#pragma once

#include <cstdint>

#include "renewrt/estimators.hpp"
#include "renewrt/rng.hpp"
#include "renewrt/step_distribution.hpp"
#include "renewrt/tally.hpp"
#include "renewrt/walk.hpp"

namespace renewrt {

inline constexpr double kWeightCutoff = 1e-8;

struct SimulationOptions {
  std::uint64_t rays = 1'000'000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t max_steps = kDefaultMaxSteps;
  double weight_cutoff = kWeightCutoff;
};

/// One ray of the homogenized one-sided model: first flight x ~ dist along
/// the ray (depth x cos theta), then a p = 1/2 renewal walk; reflected weight
/// exp(-beta (x + travel - Z-)). Rays whose weight drops below the cutoff
/// stop with weight 0.
struct PackFreeRay {
  double first_flight = 0.0;
  WalkOutcome walk;
  double reflected_weight = 0.0;
};

PackFreeRay trace_pack_free_one_sided(const MediumParams& m, const StepDistribution& dist,
                                      const SimulationOptions& opt, CounterRng& rng);

/// Homogenized ("pack-free") one-sided Beerian slab. `m.mu` is ignored in
/// favor of `dist`; use simulate_1d_one_sided(m, opt) for Exponential(mu).
TallyResult simulate_1d_one_sided(const MediumParams& m, const StepDistribution& dist,
                                  const SimulationOptions& opt);
TallyResult simulate_1d_one_sided(const MediumParams& m, const SimulationOptions& opt);

/// Non-Beerian two-sided bed of height h: x ~ dist along the ray; x cos
/// theta > h transmits; otherwise a two-sided walk decides the side.
TallyResult simulate_1d_two_sided(const StepDistribution& dist, double height, double theta,
                                  const SimulationOptions& opt);
TallyResult simulate_1d_two_sided(double mu, double height, double theta,
                                  const SimulationOptions& opt);

/// Over the same one-sided walks (start x ~ dist, theta = 0), the simulated
/// E[exp(-2 beta L)] with L the walk's total travel against the simulated
/// E[alpha^T], alpha = E exp(-2 beta Y). The delta-method estimate replaces
/// the first by the second; the gap measures that step.
struct WaldAudit {
  double beta = 0.0;
  double discounted_travel = 0.0;  ///< E[exp(-2 beta L)]
  double discounted_steps = 0.0;   ///< E[alpha^T]
  double relative_gap = 0.0;       ///< |travel - steps| / steps
  std::uint64_t walks = 0;
  /// Walks stopped at the horizon where alpha^T < 1e-17; they count as 0.
  std::uint64_t unfinished = 0;
};

WaldAudit wald_step_audit(const StepDistribution& dist, double beta, const SimulationOptions& opt);

}  // namespace renewrt
