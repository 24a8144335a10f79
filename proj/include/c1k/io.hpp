#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "c1k/charge.hpp"
#include "c1k/jet.hpp"
#include "c1k/metric.hpp"
#include "c1k/oned.hpp"
#include "c1k/raster.hpp"
#include "c1k/set1d.hpp"

namespace c1k {

using nlohmann::json;

inline constexpr const char* kToolName = "c1k";
inline constexpr const char* kToolVersion = "0.3.0";

/// Numbers with non-finite values encoded as the strings "inf", "-inf", "nan".
json num(double v);
double get_num(const json& j);

/// Parse a document; malformed text throws ParseError.
json parse_document(const std::string& text);
std::string read_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);
std::string dump(const json& j);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a64(std::string_view data);

json to_json(const CompactSet1D& set);
CompactSet1D set1d_from_json(const json& j);
json to_json(const RegionSpec& spec);
RegionSpec region_from_json(const json& j);
json to_json(const RasterSet2D& set);
RasterSet2D raster_from_json(const json& j);
/// Occupancy as alternating run lengths, starting with an unoccupied run.
std::vector<std::int64_t> rle_encode(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> rle_decode(const std::vector<std::int64_t>& runs, std::size_t size);

json to_json(const Polyline& path);
Polyline polyline_from_json(const json& j);
json to_json(const SampledJet& jet);
SampledJet jet_from_json(const json& j);
json to_json(const GridCharge& charge);
GridCharge charge_from_json(const json& j);
json to_json(const PathDecomposition& d);
PathDecomposition decomposition_from_json(const json& j);

json to_json(const SigmaPolicy& p);
/// Fields present in j override `base`.
SigmaPolicy policy_from_json(const json& j, SigmaPolicy base = {});
json to_json(const SigmaVerdict& v);
json to_json(const SigmaResult& r);
json to_json(const EqualityResult& r);
json to_json(const CompletenessVerdict& v);
json to_json(const NormReport& r);
json to_json(const UniformConstant& u);
json to_json(const Counterexample& c);

struct RunConfig {
  double tolerance = 1e-9;
  std::int64_t cell_budget = kDefaultCellBudget;
  SigmaPolicy sigma;
  ArithmeticMode mode = ArithmeticMode::Float;
  std::uint64_t seed = 20240601;
  int order = 16;
  int refinements = 3;
};

json to_json(const RunConfig& c);
RunConfig config_from_json(const json& j, RunConfig base = {});
/// C1K_CELL_BUDGET overrides the cell budget.
void apply_env(RunConfig& c);

/// Report envelope: tool, command, config with its hash, input hashes, result.
json make_report(const std::string& command, const RunConfig& config,
                 const std::vector<std::pair<std::string, std::string>>& input_hashes,
                 const json& result);

}  // namespace c1k
