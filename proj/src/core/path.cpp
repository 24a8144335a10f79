#include "c1k/path.hpp"

#include <algorithm>
#include <cmath>

namespace c1k {

Polyline::Polyline(std::vector<Point2> vertices) : v_(std::move(vertices)) {
  require(!v_.empty(), "polyline needs at least one vertex");
  cum_.reserve(v_.size());
  cum_.push_back(0.0);
  for (std::size_t j = 0; j < v_.size(); ++j) {
    require(std::isfinite(v_[j].x) && std::isfinite(v_[j].y), "polyline vertices must be finite");
    if (j > 0) cum_.push_back(cum_.back() + distance(v_[j - 1], v_[j]));
  }
}

Point2 Polyline::at(double s) const {
  if (v_.size() == 1 || s <= 0.0) return v_.front();
  if (s >= length()) return v_.back();
  auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - cum_.begin());
  const double seg = cum_[j] - cum_[j - 1];
  const double t = seg > 0.0 ? (s - cum_[j - 1]) / seg : 0.0;
  return v_[j - 1] + t * (v_[j] - v_[j - 1]);
}

double length(const Polyline& path) { return path.length(); }

Polyline arclength_param(const Polyline& path) {
  require(path.length() > 0.0, "degenerate path: zero total length");
  std::vector<Point2> out;
  for (const auto& p : path.vertices())
    if (out.empty() || !(p == out.back())) out.push_back(p);
  return Polyline(std::move(out));
}

Polyline reversed(const Polyline& path) {
  std::vector<Point2> v(path.vertices().rbegin(), path.vertices().rend());
  return Polyline(std::move(v));
}

Polyline concat(const Polyline& a, const Polyline& b) {
  require(a.back() == b.front(), "concatenated paths must share an endpoint");
  std::vector<Point2> v = a.vertices();
  v.insert(v.end(), b.vertices().begin() + 1, b.vertices().end());
  return Polyline(std::move(v));
}

double riemann_stieltjes_sum(const VectorField& field, const Polyline& path, int level) {
  const auto& v = path.vertices();
  const std::int64_t pieces = std::int64_t{1} << level;
  double sum = 0.0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    const Point2 a = v[j - 1];
    const Point2 d = v[j] - a;
    if (d.x == 0.0 && d.y == 0.0) continue;
    const Point2 step = (1.0 / static_cast<double>(pieces)) * d;
    double seg = 0.0;
    for (std::int64_t k = 0; k < pieces; ++k) {
      const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(pieces);
      seg += dot(field(a + t * d), step);
    }
    sum += seg;
  }
  return sum;
}

PathIntegralResult path_integral(const VectorField& field, const Polyline& path, int levels,
                                 double tol) {
  require(levels >= 1, "levels must be >= 1");
  PathIntegralResult r;
  double prev = riemann_stieltjes_sum(field, path, 0);
  r.value = prev;
  r.refinement_levels = 1;
  r.last_delta = 0.0;
  for (int l = 1; l < levels; ++l) {
    const double cur = riemann_stieltjes_sum(field, path, l);
    r.value = cur;
    r.refinement_levels = l + 1;
    r.last_delta = std::abs(cur - prev);
    if (r.last_delta < tol) break;
    prev = cur;
  }
  return r;
}

double ftc_residual(const ScalarField& f, const VectorField& df, const Polyline& path, int levels,
                    double tol) {
  const auto pi = path_integral(df, path, levels, tol);
  return std::abs(pi.value - (f(path.back()) - f(path.front())));
}

MeanValueCheck mean_value_check(const ScalarField& f, const VectorField& df,
                                const Polyline& path, int samples_per_segment, double tol) {
  MeanValueCheck c;
  c.lhs = std::abs(f(path.back()) - f(path.front()));
  double max_df = 0.0;
  const auto& v = path.vertices();
  for (std::size_t j = 0; j < v.size(); ++j) {
    max_df = std::max(max_df, norm(df(v[j])));
    if (j == 0) continue;
    for (int k = 1; k < samples_per_segment; ++k) {
      const double t = static_cast<double>(k) / samples_per_segment;
      max_df = std::max(max_df, norm(df(v[j - 1] + t * (v[j] - v[j - 1]))));
    }
  }
  c.rhs = path.length() * max_df;
  c.satisfied = c.lhs <= c.rhs + tol;
  return c;
}

}  // namespace c1k
