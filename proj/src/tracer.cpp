#include "renewrt/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "renewrt/error.hpp"
#include "renewrt/parallel.hpp"

namespace renewrt::mcrt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector2d scatter(const Eigen::Vector2d& normal, ScatterLaw law, CounterRng& rng) {
  const double u = rng.uniform();
  const double phi = law == ScatterLaw::HemisphericUniform ? (u - 0.5) * std::numbers::pi
                                                           : std::asin(2.0 * u - 1.0);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {normal.x() * c - normal.y() * s, normal.x() * s + normal.y() * c};
}

// Integral of w0 exp(-beta s) over [s0, s1].
double attenuated_length(double w0, double beta, double s0, double s1) {
  if (beta == 0.0) return w0 * (s1 - s0);
  return w0 * (std::exp(-beta * s0) - std::exp(-beta * s1)) / beta;
}

}  // namespace

void TraceOptions::validate() const {
  detail::require(beta >= 0.0, "beta must be >= 0");
  detail::require(theta >= 0.0 && theta < std::numbers::pi / 2, "theta must lie in [0, pi/2)");
  detail::require(weight_cutoff > 0.0 && weight_cutoff < 1.0, "weight cutoff must lie in (0, 1)");
  detail::require(max_bounces >= 1, "max_bounces must be >= 1");
}

FluxAccumulator::FluxAccumulator(double depth, std::size_t bins)
    : depth_(depth), bin_(depth / static_cast<double>(bins)), track_(bins, 0.0), net_(bins, 0.0) {
  detail::require(bins >= 1 && depth > 0.0, "flux profile needs >= 1 bin over a positive depth");
}

void FluxAccumulator::add_segment(double y0, double dy, double len, double w0, double beta) {
  if (track_.empty() || len <= 0.0) return;
  const auto n = static_cast<std::ptrdiff_t>(track_.size());
  auto bin_of = [&](double y) {
    return std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(y / bin_)), 0, n - 1);
  };
  if (dy == 0.0) {
    track_[static_cast<std::size_t>(bin_of(y0))] += attenuated_length(w0, beta, 0.0, len);
    return;
  }
  const double y1 = y0 + dy * len;
  const double lo = std::clamp(std::min(y0, y1), 0.0, depth_);
  const double hi = std::clamp(std::max(y0, y1), 0.0, depth_);
  for (std::ptrdiff_t k = bin_of(lo); k <= bin_of(hi); ++k) {
    const double edge = static_cast<double>(k) * bin_;
    const double a = std::max(lo, edge);
    const double b = std::min(hi, edge + bin_);
    if (b > a) {
      double sa = (a - y0) / dy;
      double sb = (b - y0) / dy;
      if (sa > sb) std::swap(sa, sb);
      track_[static_cast<std::size_t>(k)] += attenuated_length(w0, beta, sa, sb);
    }
    const bool up = dy > 0.0 && y0 <= edge && edge < y1;
    const bool down = dy < 0.0 && y1 <= edge && edge < y0;
    if (up || down) {
      const double w = w0 * std::exp(-beta * (edge - y0) / dy);
      net_[static_cast<std::size_t>(k)] += up ? w : -w;
    }
  }
}

FluxAccumulator& FluxAccumulator::operator+=(const FluxAccumulator& o) {
  if (track_.empty()) return *this = o;
  for (std::size_t k = 0; k < track_.size(); ++k) {
    track_[k] += o.track_[k];
    net_[k] += o.net_[k];
  }
  return *this;
}

FluxProfile FluxAccumulator::finalize(std::uint64_t rays) const {
  FluxProfile p;
  const double n = static_cast<double>(std::max<std::uint64_t>(rays, 1));
  p.bin_edges.resize(track_.size() + 1);
  for (std::size_t k = 0; k <= track_.size(); ++k) p.bin_edges[k] = static_cast<double>(k) * bin_;
  p.flux.resize(track_.size());
  p.net_upward.resize(track_.size());
  for (std::size_t k = 0; k < track_.size(); ++k) {
    p.flux[k] = track_[k] / (n * bin_);
    p.net_upward[k] = net_[k] / n;
  }
  return p;
}

TraceRecord trace_ray(const BedGeometry& bed, const TraceOptions& opt, CounterRng& rng,
                      FluxAccumulator* flux) {
  const double width = bed.width();
  const double depth = bed.depth();
  const double eps = 1e-9 * bed.radius();

  TraceRecord rec;
  Eigen::Vector2d pos(width * rng.uniform(), 0.0);
  Eigen::Vector2d dir(std::sin(opt.theta), std::cos(opt.theta));
  double w = 1.0;
  double since_event = 0.0;
  std::uint64_t bounces = 0;

  auto advance = [&](double len) {
    if (flux) flux->add_segment(pos.y(), dir.y(), len, w, opt.beta);
    w *= std::exp(-opt.beta * len);
    since_event += len;
    pos += len * dir;
  };

  for (;;) {
    const double t_bottom = dir.y() < 0.0 ? std::max(0.0, -pos.y() / dir.y()) : kInf;
    const double t_top = dir.y() > 0.0 ? std::max(0.0, (depth - pos.y()) / dir.y()) : kInf;
    const double t_side = dir.x() > 0.0   ? (width - pos.x()) / dir.x()
                          : dir.x() < 0.0 ? -pos.x() / dir.x()
                                          : kInf;
    const double t_box = std::min({t_bottom, t_top, t_side});

    if (const auto hit = bed.intersect(pos, dir, t_box)) {
      advance(hit->t);
      if (rec.first_flight < 0.0)
        rec.first_flight = since_event;
      else
        rec.free_paths.push_back(since_event);
      since_event = 0.0;
      if (w < opt.weight_cutoff) {
        rec.exit = TraceExit::Absorbed;
        rec.final_weight = w;
        return rec;
      }
      if (++bounces >= opt.max_bounces) {
        rec.exit = TraceExit::Absorbed;
        rec.final_weight = w;
        rec.censored = true;
        return rec;
      }
      pos = hit->point + eps * hit->normal;
      if (bed.periodic()) {
        if (pos.x() < 0.0) pos.x() += width;
        if (pos.x() >= width) pos.x() -= width;
      }
      dir = scatter(hit->normal, opt.law, rng);
      continue;
    }

    advance(t_box);
    if (t_box == t_bottom) {
      rec.exit = TraceExit::ReflectedBottom;
      rec.final_weight = w;
      return rec;
    }
    if (t_box == t_top) {
      rec.exit = TraceExit::TransmittedTop;
      rec.final_weight = w;
      return rec;
    }
    if (!bed.periodic()) {
      rec.exit = TraceExit::Absorbed;
      rec.final_weight = w;
      rec.censored = true;
      return rec;
    }
    pos.x() = dir.x() > 0.0 ? 0.0 : width;
  }
}

Simulation2dResult simulate_2d(const BedGeometry& bed, const TraceOptions& opt,
                               const SimulationOptions& sim, std::size_t flux_bins) {
  opt.validate();
  detail::require(sim.rays >= 1, "number of rays must be >= 1");
  detail::require(sim.workers >= 1, "workers must be >= 1");

  struct Partial {
    TallySums sums;
    std::vector<double> paths;
    std::vector<double> first;
    FluxAccumulator flux;
  };
  auto chunks = run_chunked<Partial>(
      sim.rays, sim.seed, sim.workers,
      [&](std::uint64_t, std::uint64_t first, std::uint64_t last, CounterRng& rng) {
        Partial p;
        p.flux = FluxAccumulator(bed.depth(), flux_bins);
        for (std::uint64_t i = first; i < last; ++i) {
          const TraceRecord rec = trace_ray(bed, opt, rng, &p.flux);
          p.paths.insert(p.paths.end(), rec.free_paths.begin(), rec.free_paths.end());
          if (rec.first_flight >= 0.0) p.first.push_back(rec.first_flight);
          if (rec.censored) ++p.sums.censored;
          p.sums.add_ray(rec.exit == TraceExit::ReflectedBottom ? rec.final_weight : 0.0,
                         rec.exit == TraceExit::TransmittedTop ? rec.final_weight : 0.0);
        }
        return p;
      });

  Simulation2dResult out;
  TallySums total;
  FluxAccumulator flux(bed.depth(), flux_bins);
  for (const auto& c : chunks) {
    total += c.sums;
    out.free_paths.insert(out.free_paths.end(), c.paths.begin(), c.paths.end());
    out.first_flights.insert(out.first_flights.end(), c.first.begin(), c.first.end());
    flux += c.flux;
  }
  out.tally = finalize(total);
  out.flux = flux.finalize(sim.rays);
  return out;
}

}  // namespace renewrt::mcrt
