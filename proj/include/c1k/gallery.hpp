#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c1k/io.hpp"

namespace c1k {

using Params = std::map<std::string, double>;

struct ExampleInfo {
  std::string id;
  std::string summary;
  Params defaults;
};

const std::vector<ExampleInfo>& gallery_examples();

struct GalleryArtifacts {
  std::string id;
  Params params;
  std::optional<CompactSet1D> set1d;
  std::optional<RasterSet2D> raster;
  std::vector<std::pair<std::string, SampledJet>> jets;
  std::optional<Polyline> path;
};

/// Unknown ids and out-of-range parameters throw ContractError.
GalleryArtifacts build_example(const std::string& id, const Params& params = {});

struct GalleryCheck {
  std::string id;
  std::string kind;  // "reference", "oracle" or "sanity"
  std::string expected;
  double measured = 0.0;
  bool pass = false;
  std::string detail;
};

struct GalleryReport {
  std::string id;
  Params params;
  std::vector<GalleryCheck> checks;  // sorted by id
  bool passed() const;
};

GalleryReport run_example(const std::string& id, const Params& params = {});

json to_json(const GalleryReport& r);
json to_json(const GalleryArtifacts& a);

// Builders shared with the test suites.

/// {0} u {2^-n : 0 <= n <= depth}.
CompactSet1D isolated_sequence_set(int depth = 40);
double cusp_f(Point2 p);
Point2 cusp_df(Point2 p);
/// Cusp raster cells plus the lip probes.
SampledJet cusp_jet(const RasterSet2D& raster, int depth);
/// Bump with support [-1/2, 1/2] and peak 1 at 0.
double product_bump(double t);
double product_bump_deriv(double t);
/// f on S_n = {2^-n} x [0, 1] is n^-3 bump(n^2 (y - 1/n)); 0 on S_0 and {0} x [0, 1].
double product_f(Point2 p, int depth);
SampledJet product_jet(int depth, int samples_per_segment = 64);

}  // namespace c1k
