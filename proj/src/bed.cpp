#include "renewrt/bed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "renewrt/error.hpp"
#include "renewrt/rng.hpp"

namespace renewrt::mcrt {

namespace {

constexpr std::uint64_t kBedStream = 0xBEDull << 40;
constexpr Eigen::Index kMaxCellsPerAxis = 4096;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, int line) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    std::ostringstream msg;
    msg << "bed file line " << line << ": cannot parse number '" << token << "'";
    throw InvalidArgument(msg.str());
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

}  // namespace

void BedSpec::validate() const {
  detail::require(radius > 0.0, "particle radius must be > 0");
  detail::require(width > 4.0 * radius, "bed width must exceed 4 radii");
  detail::require(depth > radius, "bed depth must exceed the particle radius");
  if (!count) {
    detail::require(volume_fraction >= 0.0 && volume_fraction < 1.0,
                    "volume fraction must lie in [0, 1)");
  }
}

std::uint64_t BedSpec::target_count() const {
  if (count) return *count;
  const double density = -std::log1p(-volume_fraction) / (std::numbers::pi * radius * radius);
  return static_cast<std::uint64_t>(std::llround(density * width * (depth - radius)));
}

BedGeometry::BedGeometry(double radius, double width, double depth, bool periodic,
                         std::uint64_t seed, std::vector<Eigen::Vector2d> centers)
    : radius_(radius),
      width_(width),
      depth_(depth),
      periodic_(periodic),
      seed_(seed),
      centers_(std::move(centers)) {
  detail::require(radius_ > 0.0 && width_ > 0.0 && depth_ > 0.0, "bed dimensions must be > 0");
  for (const auto& c : centers_)
    detail::require(c.x() >= 0.0 && c.x() < width_ && c.y() >= 0.0 && c.y() < depth_,
                    "circle centers must lie inside [0, W) x [0, D)");
  build_grid();
}

double BedGeometry::center_density() const {
  return static_cast<double>(centers_.size()) / (width_ * (depth_ - radius_));
}

Eigen::Index BedGeometry::cell_x(double x) const {
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(x / cell_w_)), 0, nx_ - 1);
}

Eigen::Index BedGeometry::cell_y(double y) const {
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(y / cell_h_)), 0, ny_ - 1);
}

void BedGeometry::build_grid() {
  const double target = 2.0 * radius_;
  nx_ = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(width_ / target), 1, kMaxCellsPerAxis);
  ny_ = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil(depth_ / target)), 1,
                                 kMaxCellsPerAxis);
  cell_w_ = width_ / static_cast<double>(nx_);
  cell_h_ = depth_ / static_cast<double>(ny_);

  std::vector<Eigen::Vector2d> placed;
  placed.reserve(centers_.size());
  for (const auto& c : centers_) {
    placed.push_back(c);
    if (periodic_) {
      if (c.x() - radius_ < 0.0) placed.emplace_back(c.x() + width_, c.y());
      if (c.x() + radius_ > width_) placed.emplace_back(c.x() - width_, c.y());
    }
  }

  auto for_cells = [&](const Eigen::Vector2d& c, auto&& fn) {
    if (c.x() + radius_ < 0.0 || c.x() - radius_ > width_) return;
    if (c.y() + radius_ < 0.0 || c.y() - radius_ > depth_) return;
    const Eigen::Index x0 = cell_x(c.x() - radius_), x1 = cell_x(c.x() + radius_);
    const Eigen::Index y0 = cell_y(c.y() - radius_), y1 = cell_y(c.y() + radius_);
    for (Eigen::Index iy = y0; iy <= y1; ++iy)
      for (Eigen::Index ix = x0; ix <= x1; ++ix) fn(iy * nx_ + ix);
  };

  std::vector<std::uint32_t> counts(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
  for (const auto& c : placed) for_cells(c, [&](Eigen::Index cell) { ++counts[cell + 1]; });
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  cell_start_ = counts;
  entries_.assign(cell_start_.back(), Eigen::Vector2d::Zero());
  std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
  for (const auto& c : placed) for_cells(c, [&](Eigen::Index cell) { entries_[fill[cell]++] = c; });
}

bool BedGeometry::test_cell(Eigen::Index ix, Eigen::Index iy, const Eigen::Vector2d& origin,
                            const Eigen::Vector2d& dir, double t_min, double& best_t,
                            Eigen::Index& best) const {
  const auto cell = static_cast<std::size_t>(iy * nx_ + ix);
  bool found = false;
  const double r2 = radius_ * radius_;
  for (std::uint32_t e = cell_start_[cell]; e < cell_start_[cell + 1]; ++e) {
    const Eigen::Vector2d oc = origin - entries_[e];
    const double b = oc.dot(dir);
    const double disc = b * b - (oc.squaredNorm() - r2);
    if (disc < 0.0) continue;
    const double t = -b - std::sqrt(disc);
    if (t > t_min && t < best_t) {
      best_t = t;
      best = static_cast<Eigen::Index>(e);
      found = true;
    }
  }
  return found;
}

std::optional<CircleHit> BedGeometry::intersect(const Eigen::Vector2d& origin,
                                                const Eigen::Vector2d& dir, double t_max,
                                                double t_min) const {
  Eigen::Index ix = cell_x(origin.x());
  Eigen::Index iy = cell_y(origin.y());
  const double inf = std::numeric_limits<double>::infinity();
  const int sx = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int sy = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  double next_x = sx > 0   ? (static_cast<double>(ix + 1) * cell_w_ - origin.x()) / dir.x()
                  : sx < 0 ? (static_cast<double>(ix) * cell_w_ - origin.x()) / dir.x()
                           : inf;
  double next_y = sy > 0   ? (static_cast<double>(iy + 1) * cell_h_ - origin.y()) / dir.y()
                  : sy < 0 ? (static_cast<double>(iy) * cell_h_ - origin.y()) / dir.y()
                           : inf;
  const double delta_x = sx != 0 ? cell_w_ / std::abs(dir.x()) : inf;
  const double delta_y = sy != 0 ? cell_h_ / std::abs(dir.y()) : inf;

  double best_t = std::nextafter(t_max, inf);
  Eigen::Index best = -1;
  for (;;) {
    test_cell(ix, iy, origin, dir, t_min, best_t, best);
    const double exit_t = std::min(next_x, next_y);
    if (best >= 0 && best_t <= exit_t) break;
    if (exit_t >= t_max) break;
    if (next_x < next_y) {
      ix += sx;
      next_x += delta_x;
    } else {
      iy += sy;
      next_y += delta_y;
    }
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) break;
  }
  if (best < 0 || best_t > t_max) return std::nullopt;
  CircleHit hit;
  hit.t = best_t;
  hit.point = origin + best_t * dir;
  hit.normal = (hit.point - entries_[static_cast<std::size_t>(best)]) / radius_;
  return hit;
}

bool BedGeometry::covered(const Eigen::Vector2d& p) const {
  const auto cell = static_cast<std::size_t>(cell_y(p.y()) * nx_ + cell_x(p.x()));
  const double r2 = radius_ * radius_;
  for (std::uint32_t e = cell_start_[cell]; e < cell_start_[cell + 1]; ++e)
    if ((p - entries_[e]).squaredNorm() < r2) return true;
  return false;
}

BedGeometry build_bed(const BedSpec& spec) {
  spec.validate();
  if (!spec.count && spec.volume_fraction > 0.9)
    std::clog << "warning: volume fraction " << spec.volume_fraction
              << " is close to full coverage; the bed will be nearly solid\n";
  const std::uint64_t n = spec.target_count();
  CounterRng rng(spec.seed, kBedStream);
  std::vector<Eigen::Vector2d> centers;
  centers.reserve(n);
  const double span_y = spec.depth - spec.radius;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = spec.width * (rng.uniform());
    const double y = spec.radius + span_y * rng.uniform();
    centers.emplace_back(std::min(x, std::nextafter(spec.width, 0.0)),
                         std::min(y, std::nextafter(spec.depth, 0.0)));
  }
  return {spec.radius, spec.width, spec.depth, spec.periodic, spec.seed, std::move(centers)};
}

void write_bed(std::ostream& out, const BedGeometry& bed) {
  out << format_double(bed.radius()) << ' ' << format_double(bed.width()) << ' '
      << format_double(bed.depth()) << ' ' << (bed.periodic() ? 1 : 0) << ' ' << bed.seed()
      << '\n';
  for (const auto& c : bed.centers())
    out << format_double(c.x()) << ' ' << format_double(c.y()) << '\n';
}

BedGeometry read_bed(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::string_view> tokens;
  while (std::getline(in, line)) {
    ++line_no;
    tokens = split(line);
    if (!tokens.empty()) break;
  }
  if (tokens.size() != 5) throw InvalidArgument("bed file header must be `radius W D periodic seed`");
  const double radius = parse_double(tokens[0], line_no);
  const double width = parse_double(tokens[1], line_no);
  const double depth = parse_double(tokens[2], line_no);
  const bool periodic = parse_double(tokens[3], line_no) != 0.0;
  std::uint64_t seed = 0;
  {
    const auto res = std::from_chars(tokens[4].data(), tokens[4].data() + tokens[4].size(), seed);
    if (res.ec != std::errc()) throw InvalidArgument("bed file header: bad seed");
  }
  std::vector<Eigen::Vector2d> centers;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = split(line);
    if (t.empty()) continue;
    if (t.size() != 2) {
      std::ostringstream msg;
      msg << "bed file line " << line_no << ": expected `cx cy`";
      throw InvalidArgument(msg.str());
    }
    centers.emplace_back(parse_double(t[0], line_no), parse_double(t[1], line_no));
  }
  return {radius, width, depth, periodic, seed, std::move(centers)};
}

}  // namespace renewrt::mcrt
