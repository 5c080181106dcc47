#pragma once

#include <cstdint>
#include <span>

namespace renewrt {

/// Per-chunk weight sums. Merged in chunk order so the final tally does not
/// depend on scheduling.
struct TallySums {
  std::uint64_t rays = 0;
  double reflected = 0.0;
  double reflected_sq = 0.0;
  double transmitted = 0.0;
  double absorbed = 0.0;
  std::uint64_t censored = 0;

  void add_ray(double reflected_weight, double transmitted_weight) {
    ++rays;
    reflected += reflected_weight;
    reflected_sq += reflected_weight * reflected_weight;
    transmitted += transmitted_weight;
    absorbed += 1.0 - reflected_weight - transmitted_weight;
  }
  TallySums& operator+=(const TallySums& o);
};

/// Monte Carlo estimate of the reflected, transmitted and absorbed fractions
/// of unit incident power. Censored rays (walk or bounce guard) are counted
/// as absorbed and reported separately.
struct TallyResult {
  std::uint64_t n_rays = 0;
  double rho = 0.0;
  double tau = 0.0;
  double absorbed = 0.0;
  double rho_stderr = 0.0;
  std::uint64_t censored = 0;

  double conservation_error() const { return rho + tau + absorbed - 1.0; }
};

TallyResult finalize(const TallySums& sums);
TallyResult merge_chunks(std::span<const TallySums> chunks);

}  // namespace renewrt
