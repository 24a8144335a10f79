#include "c1k/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "c1k/set1d.hpp"

namespace c1k {

double RegionSpec::get(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

bool operator==(const RegionSpec& a, const RegionSpec& b) {
  if (a.id != b.id || a.params != b.params) return false;
  if (!a.base || !b.base) return !a.base && !b.base;
  return *a.base == *b.base;
}

bool Region::meets_box(const Box& b) const {
  return contains({0.5 * (b.lo.x + b.hi.x), 0.5 * (b.lo.y + b.hi.y)});
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

double smoothstep_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (s - 1.0) * (s - 1.0);
}

namespace {

bool box_meets_segment_y(const Box& b, double y0, double y1) {
  return b.lo.y <= y1 && b.hi.y >= y0;
}

class Disk : public Region {
 public:
  explicit Disk(const RegionSpec& s)
      : c_{s.get("cx", 0.0), s.get("cy", 0.0)}, r_(s.get("r", 1.0)) {
    require(r_ > 0.0, "disk radius must be positive");
  }
  bool contains(Point2 p) const override { return distance(p, c_) <= r_; }
  Box bbox() const override { return {{c_.x - r_, c_.y - r_}, {c_.x + r_, c_.y + r_}}; }
  std::optional<Point2> anchor() const override { return c_; }
  std::string certificate() const override { return "convex"; }

 private:
  Point2 c_;
  double r_;
};

class Rect : public Region {
 public:
  Rect(Point2 lo, Point2 hi) : lo_(lo), hi_(hi) {
    require(lo.x < hi.x && lo.y < hi.y, "rectangle must have positive extent");
  }
  bool contains(Point2 p) const override { return Box{lo_, hi_}.contains(p); }
  Box bbox() const override { return {lo_, hi_}; }
  std::string certificate() const override { return "convex"; }

 private:
  Point2 lo_, hi_;
};

class Annulus : public Region {
 public:
  explicit Annulus(const RegionSpec& s)
      : c_{s.get("cx", 0.0), s.get("cy", 0.0)},
        r_in_(s.get("r_in", 0.5)),
        r_out_(s.get("r_out", 1.0)) {
    require(0.0 < r_in_ && r_in_ < r_out_, "annulus needs 0 < r_in < r_out");
  }
  bool contains(Point2 p) const override {
    const double d = distance(p, c_);
    return r_in_ <= d && d <= r_out_;
  }
  Box bbox() const override {
    return {{c_.x - r_out_, c_.y - r_out_}, {c_.x + r_out_, c_.y + r_out_}};
  }
  std::optional<Point2> anchor() const override { return c_; }
  std::string certificate() const override { return "annulus"; }

 private:
  Point2 c_;
  double r_in_, r_out_;
};

// K = [-1,1]^2 minus the inward cusp {x > 0, |y| < exp(-1/x)}.
class Cusp : public Region {
 public:
  explicit Cusp(const RegionSpec& s) : depth_(static_cast<int>(s.get("depth", 20))) {
    require(depth_ >= 1 && depth_ <= 60, "cusp depth must be in [1, 60]");
  }
  bool contains(Point2 p) const override {
    if (!Box{{-1, -1}, {1, 1}}.contains(p)) return false;
    return !(p.x > 0.0 && std::abs(p.y) < std::exp(-1.0 / p.x));
  }
  Box bbox() const override { return {{-1, -1}, {1, 1}}; }
  std::vector<Point2> probes() const override {
    std::vector<Point2> out;
    for (int k = 1; k <= depth_; ++k) {
      const double x = 1.0 / k;
      const double y = std::exp(-static_cast<double>(k));
      out.push_back({x, y});
      out.push_back({x, -y});
    }
    return out;
  }

 private:
  int depth_;
};

// Unit square over the Cantor fence with disjoint balls removed from the gaps.
class Sauter : public Region {
 public:
  explicit Sauter(const RegionSpec& s)
      : gens_(static_cast<int>(s.get("generations", 5))), c_(s.get("c", 0.125)) {
    require(gens_ >= 0 && gens_ <= 12, "sauter generations must be in [0, 12]");
    require(c_ > 0.0 && c_ < 0.25, "sauter diameter budget must lie in (0, 1/4)");
  }
  bool contains(Point2 p) const override {
    if (!Box{{0, 0}, {1, 1}}.contains(p)) return false;
    double lo = 0.0;
    double len = 1.0;
    for (int k = 1; k <= gens_; ++k) {
      const double third = len / 3.0;
      if (p.x <= lo + third) {
      } else if (p.x >= lo + 2.0 * third) {
        lo += 2.0 * third;
      } else {
        return !in_gap_ball(p, lo + third, lo + 2.0 * third, k);
      }
      len = third;
    }
    return true;
  }
  Box bbox() const override { return {{0, 0}, {1, 1}}; }
  bool skeleton_meets(const Box& b) const override {
    return box_meets_segment_y(b, 0.0, 1.0) && cantor_meets(b.lo.x, b.hi.x, 0.0, 1.0);
  }

 private:
  bool in_gap_ball(Point2 p, double a, double b, int k) const {
    const double d = c_ * std::pow(2.0, -3.0 * k);
    const double step = std::ldexp(1.0, -k);
    const int rows = 1 << k;
    const int i = std::clamp(static_cast<int>(std::floor(p.y / step)), 0, rows - 1);
    for (double cx : {a + d, b - d}) {
      const Point2 c{cx, (i + 0.5) * step};
      if (distance(p, c) < 0.5 * d) return true;
    }
    return false;
  }

  int gens_;
  double c_;
};

// Unit disk with balls accumulating at the wall {0} x [-1/2, 1/2].
class DiskWithHoles : public Region {
 public:
  explicit DiskWithHoles(const RegionSpec& s) : gens_(static_cast<int>(s.get("generations", 8))) {
    require(gens_ >= 0 && gens_ <= 20, "disk_with_holes generations must be in [0, 20]");
  }
  bool contains(Point2 p) const override { return resolved_contains(p, 0.0); }
  // Holes with radius below h/2 are not drawn: their centers sit on cell
  // centers and would erase whole columns next to the wall.
  bool occupies(Point2 p, double h) const override { return resolved_contains(p, 0.5 * h); }
  Box bbox() const override { return {{-1, -1}, {1, 1}}; }
  std::optional<Point2> anchor() const override { return Point2{0, 0}; }
  bool skeleton_meets(const Box& b) const override {
    return b.lo.x <= 0.0 && b.hi.x >= 0.0 && box_meets_segment_y(b, -0.5, 0.5);
  }
  std::string certificate() const override { return "disk_with_holes"; }

 private:
  bool resolved_contains(Point2 p, double min_r) const {
    if (norm(p) > 1.0) return false;
    const double ax = std::abs(p.x);
    if (ax == 0.0 || std::abs(p.y) > 0.5 + 0.1) return true;
    const int k0 = static_cast<int>(std::lround(-std::log2(ax))) - 1;
    for (int k = k0 - 1; k <= k0 + 1; ++k) {
      if (k < 1 || k > gens_) continue;
      const double off = std::ldexp(1.0, -k - 1);
      const double r = off / 8.0;
      if (r < min_r) continue;
      const int rows = 1 << (k + 1);
      const int i = std::clamp(static_cast<int>(std::lround((p.y + 0.5) / off)), 0, rows);
      const Point2 c{p.x > 0 ? off : -off, -0.5 + i * off};
      if (distance(p, c) < r) return false;
    }
    return true;
  }

  int gens_;
};

// M x [0, 1] with M = {0} u {2^-n : 0 <= n <= depth}.
class Product : public Region {
 public:
  explicit Product(const RegionSpec& s) : depth_(static_cast<int>(s.get("depth", 20))) {
    require(depth_ >= 0 && depth_ <= 60, "product depth must be in [0, 60]");
  }
  bool contains(Point2 p) const override {
    if (p.y < 0.0 || p.y > 1.0) return false;
    if (p.x == 0.0) return true;
    for (int n = 0; n <= depth_; ++n)
      if (p.x == std::ldexp(1.0, -n)) return true;
    return false;
  }
  Box bbox() const override { return {{0, 0}, {1, 1}}; }
  bool thin() const override { return true; }
  bool meets_box(const Box& b) const override {
    if (!box_meets_segment_y(b, 0.0, 1.0)) return false;
    if (b.lo.x <= 0.0 && b.hi.x >= 0.0) return true;
    for (int n = 0; n <= depth_; ++n) {
      const double m = std::ldexp(1.0, -n);
      if (b.lo.x <= m && m <= b.hi.x) return true;
    }
    return false;
  }
  std::optional<Point2> anchor() const override { return Point2{0, 0}; }
  std::string certificate() const override { return "infinite_components"; }

 private:
  int depth_;
};

class HalfPlaneClip : public Region {
 public:
  explicit HalfPlaneClip(const RegionSpec& s)
      : base_(make_region(*s.base)), n_{s.get("nx", 1.0), s.get("ny", 0.0)}, c_(s.get("c", 0.0)) {}
  bool contains(Point2 p) const override { return dot(n_, p) <= c_ && base_->contains(p); }
  bool occupies(Point2 p, double h) const override { return dot(n_, p) <= c_ && base_->occupies(p, h); }
  Box bbox() const override { return base_->bbox(); }
  bool thin() const override { return base_->thin(); }
  bool meets_box(const Box& b) const override {
    const Point2 corners[4] = {b.lo, {b.hi.x, b.lo.y}, {b.lo.x, b.hi.y}, b.hi};
    bool any = false;
    for (auto q : corners) any = any || dot(n_, q) <= c_;
    return any && base_->meets_box(b);
  }
  bool skeleton_meets(const Box& b) const override { return base_->skeleton_meets(b); }
  std::optional<Point2> anchor() const override { return base_->anchor(); }
  std::string certificate() const override {
    return base_->certificate() == "convex" ? "convex" : std::string{};
  }

 private:
  std::unique_ptr<Region> base_;
  Point2 n_;
  double c_;
};

}  // namespace

std::vector<std::string> region_ids() {
  return {"annulus", "cusp", "disk", "disk_with_holes", "halfplane_clip",
          "product", "rectangle", "sauter", "square"};
}

std::unique_ptr<Region> make_region(const RegionSpec& s) {
  if (s.id == "disk") return std::make_unique<Disk>(s);
  if (s.id == "square") {
    const double lo = s.get("lo", 0.0);
    const double side = s.get("side", 1.0);
    return std::make_unique<Rect>(Point2{lo, lo}, Point2{lo + side, lo + side});
  }
  if (s.id == "rectangle")
    return std::make_unique<Rect>(Point2{s.get("x0", 0.0), s.get("y0", 0.0)},
                                  Point2{s.get("x1", 1.0), s.get("y1", 1.0)});
  if (s.id == "annulus") return std::make_unique<Annulus>(s);
  if (s.id == "cusp") return std::make_unique<Cusp>(s);
  if (s.id == "sauter") return std::make_unique<Sauter>(s);
  if (s.id == "disk_with_holes") return std::make_unique<DiskWithHoles>(s);
  if (s.id == "product") return std::make_unique<Product>(s);
  if (s.id == "halfplane_clip") {
    require(s.base != nullptr, "halfplane_clip needs a base region");
    return std::make_unique<HalfPlaneClip>(s);
  }
  throw ContractError("unknown region: " + s.id);
}

std::vector<Ball> sauter_balls(int generations, double c) {
  std::vector<Ball> out;
  std::vector<Interval1D> level{{0.0, 1.0}};
  for (int k = 1; k <= generations; ++k) {
    const double d = c * std::pow(2.0, -3.0 * k);
    const double step = std::ldexp(1.0, -k);
    std::vector<Interval1D> next;
    for (const auto& iv : level) {
      const double third = iv.length() / 3.0;
      const double a = iv.lo + third;
      const double b = iv.hi - third;
      for (int i = 0; i < (1 << k); ++i) {
        out.push_back({{a + d, (i + 0.5) * step}, 0.5 * d});
        out.push_back({{b - d, (i + 0.5) * step}, 0.5 * d});
      }
      next.push_back({iv.lo, a});
      next.push_back({b, iv.hi});
    }
    level = std::move(next);
  }
  return out;
}

std::vector<Ball> wall_balls(int generations) {
  std::vector<Ball> out;
  for (int k = 1; k <= generations; ++k) {
    const double off = std::ldexp(1.0, -k - 1);
    for (int i = 0; i <= (1 << (k + 1)); ++i)
      for (double sx : {-1.0, 1.0}) out.push_back({{sx * off, -0.5 + i * off}, off / 8.0});
  }
  return out;
}

RasterSet2D::RasterSet2D(Point2 origin, double h, int nx, int ny,
                         std::vector<std::uint8_t> occupancy, std::vector<std::uint8_t> skeleton,
                         std::optional<RegionSpec> source)
    : origin_(origin),
      h_(h),
      nx_(nx),
      ny_(ny),
      occ_(std::move(occupancy)),
      skel_(std::move(skeleton)),
      source_(std::move(source)) {
  require(h > 0.0 && std::isfinite(h), "cell size must be positive");
  require(nx > 0 && ny > 0, "grid extents must be positive");
  require(occ_.size() == static_cast<std::size_t>(nx) * ny, "occupancy size mismatch");
  require(skel_.empty() || skel_.size() == occ_.size(), "skeleton size mismatch");
  require(occupied_count() > 0, "raster must have at least one occupied cell");
}

Point2 RasterSet2D::center(int idx) const {
  return {origin_.x + (col(idx) + 0.5) * h_, origin_.y + (row(idx) + 0.5) * h_};
}

Box RasterSet2D::cell_box(int idx) const {
  const Point2 lo{origin_.x + col(idx) * h_, origin_.y + row(idx) * h_};
  return {lo, {lo.x + h_, lo.y + h_}};
}

int RasterSet2D::cell_of(Point2 p) const {
  const double fx = (p.x - origin_.x) / h_;
  const double fy = (p.y - origin_.y) / h_;
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= nx_ && fy <= ny_)) return -1;
  const int i = std::min(static_cast<int>(fx), nx_ - 1);
  const int j = std::min(static_cast<int>(fy), ny_ - 1);
  return index(i, j);
}

int RasterSet2D::nearest_occupied(Point2 p) const {
  int best = -1;
  double bd = kInf;
  for (int idx = 0; idx < static_cast<int>(occ_.size()); ++idx) {
    if (!occ_[idx]) continue;
    const double d = distance(center(idx), p);
    if (d < bd) {
      bd = d;
      best = idx;
    }
  }
  return best;
}

bool RasterSet2D::contains(Point2 p) const {
  const int idx = cell_of(p);
  return idx >= 0 && occ_[idx] != 0;
}

std::size_t RasterSet2D::occupied_count() const {
  return static_cast<std::size_t>(std::count_if(occ_.begin(), occ_.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

bool RasterSet2D::interior(int idx) const {
  if (!occ_[idx] || on_skeleton(idx)) return false;
  const int i = col(idx), j = row(idx);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (!occupied(i + di, j + dj)) return false;
  return true;
}

bool RasterSet2D::boundary(int idx) const {
  if (!occ_[idx]) return false;
  const int i = col(idx), j = row(idx);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (!occupied(i + di, j + dj)) return true;
  return false;
}

std::vector<int> RasterSet2D::occupied_cells() const {
  std::vector<int> out;
  for (int idx = 0; idx < static_cast<int>(occ_.size()); ++idx)
    if (occ_[idx]) out.push_back(idx);
  return out;
}

RasterSet2D rasterize(const RegionSpec& spec, double h, std::int64_t cell_budget) {
  require(h > 0.0 && std::isfinite(h), "cell size must be positive");
  const auto region = make_region(spec);
  const Box box = region->bbox();
  Point2 origin = box.lo;
  if (auto a = region->anchor()) {
    origin.x = a->x - 0.5 * h - std::ceil((a->x - 0.5 * h - box.lo.x) / h - 1e-9) * h;
    origin.y = a->y - 0.5 * h - std::ceil((a->y - 0.5 * h - box.lo.y) / h - 1e-9) * h;
  }
  const double fx = std::ceil((box.hi.x - origin.x) / h - 1e-9);
  const double fy = std::ceil((box.hi.y - origin.y) / h - 1e-9);
  require(fx * fy <= static_cast<double>(cell_budget),
          "grid exceeds the cell budget; increase h or the budget");
  const int nx = std::max(1, static_cast<int>(fx));
  const int ny = std::max(1, static_cast<int>(fy));
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<std::uint8_t> skel;
  bool any_skel = false;
  std::vector<std::uint8_t> sk(occ.size(), 0);
  const bool thin = region->thin();
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 lo{origin.x + i * h, origin.y + j * h};
      const Box cell{lo, {lo.x + h, lo.y + h}};
      const std::size_t idx = static_cast<std::size_t>(j) * nx + i;
      occ[idx] = thin ? region->meets_box(cell) : region->occupies({lo.x + 0.5 * h, lo.y + 0.5 * h}, h);
      if (region->skeleton_meets(cell)) {
        sk[idx] = 1;
        any_skel = true;
      }
    }
  }
  if (any_skel) skel = std::move(sk);
  require(std::any_of(occ.begin(), occ.end(), [](std::uint8_t v) { return v != 0; }),
          "region rasterizes to an empty grid at this cell size");
  return RasterSet2D(origin, h, nx, ny, std::move(occ), std::move(skel), spec);
}

RasterSet2D refine(const RasterSet2D& set, int factor, std::int64_t cell_budget) {
  require(factor >= 1, "refinement factor must be positive");
  require(set.source().has_value(), "refine needs a source region descriptor");
  return rasterize(*set.source(), set.h() / factor, cell_budget);
}

RasterSet2D dilate(const RasterSet2D& set, double eps) {
  require(eps >= 0.0 && std::isfinite(eps), "dilation must be nonnegative");
  if (eps == 0.0) return set;
  const int pad = static_cast<int>(std::ceil(eps / set.h()));
  const int nx = set.nx() + 2 * pad;
  const int ny = set.ny() + 2 * pad;
  const double h = set.h();
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny, 0);
  std::vector<std::uint8_t> skel;
  if (!set.skeleton().empty()) skel.assign(occ.size(), 0);
  for (int j = 0; j < set.ny(); ++j) {
    for (int i = 0; i < set.nx(); ++i) {
      const int src = set.index(i, j);
      if (!skel.empty() && set.on_skeleton(src))
        skel[static_cast<std::size_t>(j + pad) * nx + i + pad] = 1;
      if (!set.occupied(src)) continue;
      for (int dj = -pad; dj <= pad; ++dj)
        for (int di = -pad; di <= pad; ++di)
          if (std::hypot(di * h, dj * h) <= eps * (1.0 + 1e-12))
            occ[static_cast<std::size_t>(j + pad + dj) * nx + i + pad + di] = 1;
    }
  }
  const Point2 origin{set.origin().x - pad * h, set.origin().y - pad * h};
  return RasterSet2D(origin, h, nx, ny, std::move(occ), std::move(skel));
}

Components2D components(const RasterSet2D& set) {
  Components2D out;
  out.label.assign(set.size(), -1);
  std::deque<int> queue;
  for (int start = 0; start < static_cast<int>(set.size()); ++start) {
    if (!set.occupied(start) || out.label[start] >= 0) continue;
    out.label[start] = out.count;
    queue.push_back(start);
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      const int i = set.col(c), j = set.row(c);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (!set.occupied(i + di, j + dj)) continue;
          const int n = set.index(i + di, j + dj);
          if (out.label[n] >= 0) continue;
          out.label[n] = out.count;
          queue.push_back(n);
        }
      }
    }
    ++out.count;
  }
  return out;
}

}  // namespace c1k
