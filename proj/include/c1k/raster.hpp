#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c1k/common.hpp"

namespace c1k {

struct Box {
  Point2 lo;
  Point2 hi;
  bool contains(Point2 p) const { return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y; }
};

/// Closed-form region descriptor: a name plus numeric parameters. Composite
/// regions (halfplane_clip) carry their operand in `base`.
struct RegionSpec {
  std::string id;
  std::map<std::string, double> params;
  std::shared_ptr<const RegionSpec> base;

  double get(const std::string& key, double fallback) const;
  friend bool operator==(const RegionSpec& a, const RegionSpec& b);
};

class Region {
 public:
  virtual ~Region() = default;
  virtual bool contains(Point2 p) const = 0;
  /// Cell-center rule at cell size h. Regions may drop features below resolution.
  virtual bool occupies(Point2 center, double) const { return contains(center); }
  virtual Box bbox() const = 0;
  /// Measure-zero pieces (segments); rasterized by box intersection.
  virtual bool thin() const { return false; }
  virtual bool meets_box(const Box& b) const;
  /// Structure that belongs to K but not to its interior (fences, walls).
  virtual bool skeleton_meets(const Box&) const { return false; }
  /// A point that should sit at a cell center when rasterizing.
  virtual std::optional<Point2> anchor() const { return std::nullopt; }
  /// Analytic certificate name: "convex", "annulus", "disk_with_holes",
  /// "infinite_components", or empty.
  virtual std::string certificate() const { return {}; }
  /// Extra sample sites that the raster cannot resolve (cusp lips).
  virtual std::vector<Point2> probes() const { return {}; }
};

std::unique_ptr<Region> make_region(const RegionSpec& spec);
std::vector<std::string> region_ids();

inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 24;

class RasterSet2D {
 public:
  RasterSet2D() = default;
  RasterSet2D(Point2 origin, double h, int nx, int ny, std::vector<std::uint8_t> occupancy,
              std::vector<std::uint8_t> skeleton = {},
              std::optional<RegionSpec> source = std::nullopt);

  Point2 origin() const { return origin_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return occ_.size(); }
  const std::vector<std::uint8_t>& occupancy() const { return occ_; }
  const std::vector<std::uint8_t>& skeleton() const { return skel_; }
  const std::optional<RegionSpec>& source() const { return source_; }

  int index(int i, int j) const { return j * nx_ + i; }
  int col(int idx) const { return idx % nx_; }
  int row(int idx) const { return idx / nx_; }
  bool in_grid(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool occupied(int i, int j) const { return in_grid(i, j) && occ_[index(i, j)] != 0; }
  bool occupied(int idx) const { return occ_[idx] != 0; }
  bool on_skeleton(int idx) const { return !skel_.empty() && skel_[idx] != 0; }
  Point2 center(int idx) const;
  Box cell_box(int idx) const;
  /// Cell containing p, or -1 outside the grid.
  int cell_of(Point2 p) const;
  /// Occupied cell whose center is nearest to p (ties: lowest index), or -1.
  int nearest_occupied(Point2 p) const;
  bool contains(Point2 p) const;
  std::size_t occupied_count() const;
  /// Occupied, all 8 neighbors occupied, and off the skeleton.
  bool interior(int idx) const;
  /// Occupied with a missing 8-neighbor (or at the grid edge).
  bool boundary(int idx) const;
  std::vector<int> occupied_cells() const;

 private:
  Point2 origin_;
  double h_ = 1.0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint8_t> skel_;
  std::optional<RegionSpec> source_;
};

RasterSet2D rasterize(const RegionSpec& spec, double h,
                      std::int64_t cell_budget = kDefaultCellBudget);
RasterSet2D refine(const RasterSet2D& set, int factor,
                   std::int64_t cell_budget = kDefaultCellBudget);
/// Grid padded by ceil(eps/h) cells; a cell is occupied when its center lies
/// within eps of an occupied center.
RasterSet2D dilate(const RasterSet2D& set, double eps);

struct Components2D {
  int count = 0;
  std::vector<int> label;  // -1 for unoccupied cells
};

Components2D components(const RasterSet2D& set);

/// Quintic smoothstep 6s^5 - 15s^4 + 10s^3 clamped to [0, 1], and its derivative.
double smoothstep(double s);
double smoothstep_deriv(double s);

/// Parameters of the removed-ball schedules, exposed for tests and reports.
struct Ball {
  Point2 c;
  double r;
};
std::vector<Ball> sauter_balls(int generations, double c);
std::vector<Ball> wall_balls(int generations);

}  // namespace c1k
