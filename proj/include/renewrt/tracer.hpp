#pragma once

#include <cstdint>
#include <vector>

#include "renewrt/bed.hpp"
#include "renewrt/pack_free.hpp"
#include "renewrt/rng.hpp"
#include "renewrt/tally.hpp"

namespace renewrt::mcrt {

/// Re-emission law at an opaque particle surface, over the half-plane of the
/// outward normal.
enum class ScatterLaw {
  HemisphericUniform,  ///< angle from the normal uniform in (-pi/2, pi/2)
  LambertianCosine,    ///< density proportional to cos of that angle
};

enum class TraceExit { ReflectedBottom, TransmittedTop, Absorbed };

struct TraceOptions {
  double beta = 1.0;
  double theta = 0.0;
  ScatterLaw law = ScatterLaw::HemisphericUniform;
  double weight_cutoff = kWeightCutoff;
  std::uint64_t max_bounces = 1'000'000;

  void validate() const;
};

struct TraceRecord {
  /// Distances between consecutive scattering events; the entry flight is
  /// kept apart in `first_flight`.
  std::vector<double> free_paths;
  double first_flight = -1.0;  ///< < 0 when the ray never hit a particle
  TraceExit exit = TraceExit::Absorbed;
  double final_weight = 1.0;
  bool censored = false;  ///< bounce guard fired or the ray left a non-periodic bed sideways
};

/// Depth-resolved flux tallies on uniform bins over [0, depth].
struct FluxProfile {
  std::vector<double> bin_edges;
  /// Track-length estimate of the scalar flux per bin, per incident ray.
  std::vector<double> flux;
  /// Net upward weighted crossings of each bin's lower edge, per incident ray.
  std::vector<double> net_upward;
};

class FluxAccumulator {
 public:
  FluxAccumulator() = default;
  FluxAccumulator(double depth, std::size_t bins);

  /// Straight segment from depth y0, direction cosine dy, length len, start
  /// weight w0, attenuation beta.
  void add_segment(double y0, double dy, double len, double w0, double beta);
  FluxAccumulator& operator+=(const FluxAccumulator& o);
  FluxProfile finalize(std::uint64_t rays) const;
  bool empty() const { return track_.empty(); }

 private:
  double depth_ = 0.0;
  double bin_ = 0.0;
  std::vector<double> track_;
  std::vector<double> net_;
};

/// One ray entering at a uniform point of y = 0 at angle theta from the
/// normal. Exact ray-circle intersection; weight decays as exp(-beta s)
/// along the path. Exits: back through y = 0, through y = depth, or weight
/// below cutoff.
TraceRecord trace_ray(const BedGeometry& bed, const TraceOptions& opt, CounterRng& rng,
                      FluxAccumulator* flux = nullptr);

struct Simulation2dResult {
  TallyResult tally;
  std::vector<double> free_paths;
  std::vector<double> first_flights;
  FluxProfile flux;
};

Simulation2dResult simulate_2d(const BedGeometry& bed, const TraceOptions& opt,
                               const SimulationOptions& sim, std::size_t flux_bins = 50);

}  // namespace renewrt::mcrt
