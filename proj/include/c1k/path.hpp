#pragma once

#include <functional>
#include <vector>

#include "c1k/common.hpp"

namespace c1k {

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Point2(Point2)>;

class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return v_; }
  /// cum[j] = length of the path up to vertex j.
  const std::vector<double>& cumulative() const { return cum_; }
  std::size_t size() const { return v_.size(); }
  Point2 front() const { return v_.front(); }
  Point2 back() const { return v_.back(); }
  double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
  /// Point at arc-length parameter s in [0, length()].
  Point2 at(double s) const;

 private:
  std::vector<Point2> v_;
  std::vector<double> cum_;
};

double length(const Polyline& path);
/// Same trace with zero-length runs collapsed; the cumulative table is the
/// arc-length parameter at each vertex.
Polyline arclength_param(const Polyline& path);
Polyline reversed(const Polyline& path);
Polyline concat(const Polyline& a, const Polyline& b);

struct PathIntegralResult {
  double value = 0.0;
  int refinement_levels = 0;
  double last_delta = 0.0;
};

inline constexpr double kPathTolerance = 1e-9;

/// Dyadic midpoint Riemann-Stieltjes sums: level l splits every segment into
/// 2^l pieces. Stops at the first level whose change is below tol.
PathIntegralResult path_integral(const VectorField& field, const Polyline& path, int levels,
                                 double tol = kPathTolerance);

/// Sum over one refinement level (exposed for convergence studies).
double riemann_stieltjes_sum(const VectorField& field, const Polyline& path, int level);

double ftc_residual(const ScalarField& f, const VectorField& df, const Polyline& path,
                    int levels = 12, double tol = kPathTolerance);

struct MeanValueCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

MeanValueCheck mean_value_check(const ScalarField& f, const VectorField& df,
                                const Polyline& path, int samples_per_segment = 64,
                                double tol = kPathTolerance);

}  // namespace c1k
