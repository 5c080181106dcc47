#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace renewrt::mcrt {

/// Random 2-D bed of overlapping opaque circles (Boolean model). The slab
/// occupies 0 <= y <= depth, rays enter through y = 0, and x wraps with
/// period `width` when `periodic` is set.
struct BedSpec {
  double radius = 1.0;
  /// Explicit particle count; when empty it follows from volume_fraction.
  std::optional<std::uint64_t> count;
  /// Target covered-area fraction 1 - exp(-lambda pi r^2) of the Boolean model.
  double volume_fraction = 0.2;
  double width = 200.0;
  double depth = 21.0;
  bool periodic = true;
  std::uint64_t seed = 1;

  void validate() const;
  /// Number of centers implied by the target fraction over the center region.
  std::uint64_t target_count() const;
};

struct CircleHit {
  double t = 0.0;
  Eigen::Vector2d point;
  Eigen::Vector2d normal;
};

/// Immutable after construction; safe to share read-only across workers.
class BedGeometry {
 public:
  BedGeometry(double radius, double width, double depth, bool periodic, std::uint64_t seed,
              std::vector<Eigen::Vector2d> centers);

  double radius() const { return radius_; }
  double width() const { return width_; }
  double depth() const { return depth_; }
  bool periodic() const { return periodic_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Eigen::Vector2d>& centers() const { return centers_; }

  /// Centers per unit area of the region they are drawn from, y in [r, depth).
  double center_density() const;

  /// Nearest circle entry along origin + t dir with t in (t_min, t_max].
  /// `dir` must be unit length; `origin` must lie inside the slab box.
  std::optional<CircleHit> intersect(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                                     double t_max, double t_min = 0.0) const;

  /// True when `p` lies inside some circle (periodic images included).
  bool covered(const Eigen::Vector2d& p) const;

 private:
  void build_grid();
  Eigen::Index cell_x(double x) const;
  Eigen::Index cell_y(double y) const;
  bool test_cell(Eigen::Index ix, Eigen::Index iy, const Eigen::Vector2d& origin,
                 const Eigen::Vector2d& dir, double t_min, double& best_t, Eigen::Index& best) const;

  double radius_;
  double width_;
  double depth_;
  bool periodic_;
  std::uint64_t seed_;
  std::vector<Eigen::Vector2d> centers_;

  // Uniform grid over [0, width) x [0, depth]; entries hold circle centers,
  // shifted by +-width for periodic images.
  Eigen::Index nx_ = 1;
  Eigen::Index ny_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<Eigen::Vector2d> entries_;
};

/// Centers i.i.d. uniform over [0, width) x [radius, depth): every particle
/// lies wholly inside the slab and the entry face y = 0 is open matrix.
BedGeometry build_bed(const BedSpec& spec);

/// Plain text: header `radius W D periodic seed`, then one `cx cy` per line.
/// Shortest round-trip decimal, independent of the C++ locale.
void write_bed(std::ostream& out, const BedGeometry& bed);
BedGeometry read_bed(std::istream& in);

}  // namespace renewrt::mcrt
