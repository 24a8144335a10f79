#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <string>
#include <vector>

#include "c1k/common.hpp"
#include "c1k/path.hpp"
#include "c1k/raster.hpp"

namespace c1k {

/// Point sites with values and derivative vectors. One-dimensional jets keep
/// their coordinate in x and leave y (and df.y) at zero.
struct SampledJet {
  int dim = 2;
  std::vector<Point2> sites;
  std::vector<double> f;
  std::vector<Point2> df;
  /// Sites that are isolated points of the carrier set (free derivative choice).
  std::vector<std::uint8_t> isolated;
  std::string set_ref;

  std::size_t size() const { return sites.size(); }
  bool is_isolated(std::size_t i) const { return !isolated.empty() && isolated[i] != 0; }
  void validate() const;
};

SampledJet sample_jet(const std::vector<Point2>& sites, const ScalarField& f,
                      const VectorField& df, int dim = 2);
/// Jet on the occupied cell centers of a raster.
SampledJet sample_jet(const RasterSet2D& set, const ScalarField& f, const VectorField& df);

/// Uniform-grid hash over jet sites for radius queries.
class SiteIndex {
 public:
  SiteIndex(const std::vector<Point2>& sites, double cell);
  /// Calls fn(j) for every site j with |site_j - p| <= r (r <= cell keeps the
  /// scan to the 3x3 block; larger radii scan proportionally more buckets).
  void for_each_within(Point2 p, double r, const std::function<void(std::size_t)>& fn) const;
  /// Site index exactly at p (within tol), or -1.
  long find(Point2 p, double tol) const;

 private:
  static std::uint64_t key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint32_t>(j);
  }
  const std::vector<Point2>* sites_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

double diff_residual(const SampledJet& jet, std::size_t x, double delta);
/// Residual of site x over several radii at once (ladder sorted descending).
std::vector<double> diff_residual_ladder(const SampledJet& jet, std::size_t x,
                                         const std::vector<double>& ladder);
double uniform_residual(const SampledJet& jet, double delta);
/// Geometric ladder {2^-1, ..., 2^-count} * diam.
std::vector<double> default_ladder(double diam, int count = 10);
double site_diameter(const SampledJet& jet);

struct NormReport {
  double sup_f = 0.0;
  double sup_df = 0.0;
  double lip = 0.0;
  long lip_i = -1;
  long lip_j = -1;
  double j1 = 0.0;
  double e1 = 0.0;
  double c1_upper = 0.0;
};

NormReport norms(const SampledJet& jet);
/// All-pairs Lipschitz quotient with witness (reference implementation).
NormReport lipschitz_bruteforce(const SampledJet& jet);

struct ExtensionReport {
  double sup_f_error = 0.0;
  double sup_df_error = 0.0;
  std::size_t squares = 0;
};

/// Smooth extension h with its gradient.
class Extension {
 public:
  virtual ~Extension() = default;
  virtual double value(Point2 p) const = 0;
  virtual Point2 gradient(Point2 p) const = 0;
  virtual double weight_sum(Point2) const { return 1.0; }
  ExtensionReport report;
};

/// Partition-of-unity extension over squares of side rho anchored at `origin`.
std::unique_ptr<Extension> extend_partition_unity(const SampledJet& jet, Point2 origin, double rho);

/// h(x) = f(c + (x - c)/r) for a jet on the occupied cell centers of `set`,
/// which must satisfy c + (K - c)/r inside the raster interior.
std::unique_ptr<Extension> extend_blowup(const SampledJet& jet, const RasterSet2D& set, double r,
                                         Point2 c = {0.0, 0.0});

/// Path integral of the jet derivative along a polyline whose vertices are
/// jet sites; df is interpolated linearly along each segment.
double jet_ftc_residual(const SampledJet& jet, const Polyline& path, int levels = 12,
                        double tol = kPathTolerance);

}  // namespace c1k
