#pragma once

#include <string>
#include <vector>

#include "c1k/path.hpp"
#include "c1k/raster.hpp"
#include "c1k/set1d.hpp"

namespace c1k {

/// Grid shortest-path distances from one source. `graph` is the raster the
/// search ran on (the dilated raster when eps > 0).
struct GeodesicField {
  RasterSet2D graph;
  int source = -1;
  int order = 16;
  std::vector<double> dist;
  std::vector<int> pred;
};

/// Worst-case ratio of grid distance to euclidean distance on a convex region.
inline constexpr double kDistortion16 = 1.0275;
inline constexpr double kDistortion8 = 1.0824;

GeodesicField geodesic_distances(const RasterSet2D& set, Point2 source, double eps = 0.0,
                                 int order = 16);
Polyline geodesic_path(const GeodesicField& field, int target);

/// Low-level Dijkstra over the cells accepted by `allowed`. Stops once every
/// cell in `targets` is settled (targets empty: full search).
struct DijkstraOptions {
  int order = 16;
  const std::vector<std::uint8_t>* allowed = nullptr;  // null: occupied cells
  std::vector<int> targets;
};
void dijkstra(const RasterSet2D& set, int source, const DijkstraOptions& opt,
              std::vector<double>& dist, std::vector<int>* pred = nullptr);

/// C_x(delta) for each delta in the ladder (ascending or not; reported in input order).
std::vector<double> whitney_constant_pointwise(const RasterSet2D& set, Point2 x,
                                               const std::vector<double>& ladder, int order = 16);

struct UniformConstant {
  double value = 1.0;
  int a = -1;
  int b = -1;
  std::size_t sources = 0;
  bool sampled = false;
};

/// All pairs when N^2 <= pair_budget, else every boundary cell as a source
/// (strided down to max_sources).
UniformConstant whitney_constant_uniform(const RasterSet2D& set, int order = 16,
                                         bool per_component = false,
                                         double pair_budget = 1e6, std::size_t max_sources = 512);

/// sup of C_s(delta) over boundary cells s within radius r of `probe`.
UniformConstant local_whitney_constant(const RasterSet2D& set, Point2 probe, double r,
                                       double delta, int order = 16,
                                       std::size_t max_sources = 48);

/// Like the pointwise constant at a single delta, on the graph of interior
/// cells plus x and each target y. Unreachable targets give infinity.
double interior_whitney_constant(const RasterSet2D& set, Point2 x, double delta, int order = 16);

/// Growth classification of a refinement series.
struct SeriesGrade {
  bool diverging = false;  // growth >= factor on every doubling (or infinite)
  bool bounded = false;    // consecutive values within 10%
  double min_growth = 0.0;
};

inline constexpr double kDivergenceGrowth = 1.25;
SeriesGrade grade_series(const std::vector<double>& series, double growth = kDivergenceGrowth);

enum class VerdictKind { Complete, Incomplete, EvidenceOnly };
std::string to_string(VerdictKind k);

struct CompletenessVerdict {
  VerdictKind kind = VerdictKind::EvidenceOnly;
  std::string reason;
  /// Refinement series backing the verdict (empty for certificates).
  std::vector<double> pointwise_series;
  std::vector<double> local_series;
  std::vector<double> h_series;
  SeriesGrade pointwise_grade;
  SeriesGrade local_grade;
};

CompletenessVerdict completeness_verdict(const CompactSet1D& set);

struct VerdictOptions {
  int refinements = 3;  // number of doublings after the base raster
  Point2 probe{0.0, 0.0};
  double radius = 0.5;
  double delta = 0.5;
  int order = 16;
  std::int64_t cell_budget = kDefaultCellBudget;
};

CompletenessVerdict completeness_verdict(const RasterSet2D& set, const VerdictOptions& opt = {});

}  // namespace c1k
