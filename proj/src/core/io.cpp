#include "c1k/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace c1k {

namespace {

template <class F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// A "type" tag, when present, must name the expected document kind.
void expect_type(const json& j, const char* type) {
  if (j.is_object() && j.contains("type") && j["type"] != type)
    throw ParseError(std::string("expected a ") + type + " document");
}

json point(Point2 p) { return json::array({num(p.x), num(p.y)}); }

Point2 point_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() < 1 || j.size() > 2) throw ParseError("point must be [x, y]");
  return {get_num(j.at(0)), j.size() == 2 ? get_num(j.at(1)) : 0.0};
}

json law_json(const SequenceLaw& l) {
  return {{"scale", num(l.scale)}, {"power", num(l.power)}, {"rate", num(l.rate)}};
}

SequenceLaw law_from(const json& j) {
  return {j.value("scale", 1.0), j.value("power", 0.0), j.value("rate", 0.0)};
}

json grid_json(const ChargeGrid& g) {
  return {{"origin", point(g.origin)}, {"h", num(g.h)}, {"nx", g.nx}, {"ny", g.ny}};
}

ChargeGrid grid_from(const json& j) {
  ChargeGrid g;
  g.origin = point_from(j.at("origin"));
  g.h = get_num(j.at("h"));
  g.nx = j.at("nx").get<int>();
  g.ny = j.at("ny").get<int>();
  g.validate();
  return g;
}

json sparse_cells(const GridCharge& c) {
  json cells = json::array();
  for (int j = 0; j < c.grid.ny; ++j)
    for (int i = 0; i < c.grid.nx; ++i) {
      const int k = c.grid.index(i, j);
      if (c.mu1[k] != 0.0 || c.mu2[k] != 0.0) cells.push_back({i, j, num(c.mu1[k]), num(c.mu2[k])});
    }
  return cells;
}

GridCharge charge_from_cells(const ChargeGrid& g, const json& cells) {
  GridCharge c = GridCharge::zeros(g);
  for (const auto& t : cells) {
    if (!t.is_array() || t.size() != 4) throw ParseError("charge cells must be [i, j, mu1, mu2]");
    const int i = t[0].get<int>(), j = t[1].get<int>();
    require(i >= 0 && j >= 0 && i < g.nx && j < g.ny, "charge cell outside the grid");
    c.mu1[g.index(i, j)] += get_num(t[2]);
    c.mu2[g.index(i, j)] += get_num(t[3]);
  }
  c.validate();
  return c;
}

json path_entries(const std::vector<DecomposedPath>& v, const ChargeGrid& g) {
  json out = json::array();
  for (const auto& e : v) {
    json cells = json::array();
    for (int k : e.cells) cells.push_back({k % g.nx, k / g.nx});
    out.push_back({{"weight", num(e.weight)}, {"length", num(e.path.length())}, {"cells", cells}});
  }
  return out;
}

std::vector<DecomposedPath> entries_from(const json& arr, const ChargeGrid& g) {
  std::vector<DecomposedPath> out;
  for (const auto& e : arr) {
    DecomposedPath p;
    p.weight = get_num(e.at("weight"));
    require(p.weight > 0.0, "decomposition weights must be positive");
    std::vector<Point2> pts;
    for (const auto& c : e.at("cells")) {
      const int i = c.at(0).get<int>(), j = c.at(1).get<int>();
      require(i >= 0 && j >= 0 && i < g.nx && j < g.ny, "decomposition cell outside the grid");
      p.cells.push_back(g.index(i, j));
      pts.push_back(g.center(i, j));
    }
    require(!p.cells.empty(), "decomposition entries need at least one cell");
    p.path = Polyline(std::move(pts));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number");
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), "cannot write " + path);
    out << content;
    require(static_cast<bool>(out), "write failed for " + path);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, "cannot move output into place: " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json to_json(const CompactSet1D& set) {
  json intervals = json::array();
  for (const auto& iv : set.explicit_intervals()) intervals.push_back({num(iv.lo), num(iv.hi)});
  json rules = json::array();
  for (const auto& r : set.rules()) {
    json jr = {{"kind", to_string(r.kind)}};
    if (r.is_cantor()) {
      jr["level"] = r.level;
      jr["span"] = {num(r.span_lo), num(r.span_hi)};
    } else {
      jr["accumulation"] = num(r.accumulation);
      jr["side"] = to_string(r.side);
      if (r.kind == GapRuleKind::ExplicitList) {
        json offs = json::array();
        for (double o : r.offsets) offs.push_back(num(o));
        jr["offsets"] = offs;
      } else {
        jr["start"] = r.start;
        jr["law"] = law_json(r.law);
        jr["width"] = law_json(r.width);
        if (r.kind == GapRuleKind::Geometric) jr["a"] = num(r.parameter);
        if (r.kind == GapRuleKind::Power) jr["p"] = num(r.parameter);
      }
    }
    rules.push_back(jr);
  }
  return {{"type", "compact_set_1d"},
          {"intervals", intervals},
          {"rules", rules},
          {"truncation_depth", set.truncation_depth()}};
}

CompactSet1D set1d_from_json(const json& j) {
  return guarded("compact set", [&] {
    expect_type(j, "compact_set_1d");
    std::vector<Interval1D> intervals;
    for (const auto& iv : j.value("intervals", json::array())) {
      if (!iv.is_array() || iv.size() != 2) throw ParseError("interval must be [lo, hi]");
      intervals.push_back({get_num(iv[0]), get_num(iv[1])});
    }
    std::vector<GapRule> rules;
    for (const auto& jr : j.value("rules", json::array())) {
      const auto kind = gap_rule_kind_from_string(jr.at("kind").get<std::string>());
      const double acc = jr.contains("accumulation") ? get_num(jr["accumulation"]) : 0.0;
      const Side side = side_from_string(jr.value("side", std::string("right")));
      GapRule r;
      switch (kind) {
        case GapRuleKind::CantorMiddleThird: {
          const auto span = jr.value("span", json::array({0.0, 1.0}));
          r = GapRule::cantor(jr.value("level", 8), get_num(span.at(0)), get_num(span.at(1)));
          break;
        }
        case GapRuleKind::ExplicitList: {
          std::vector<double> offs;
          for (const auto& o : jr.at("offsets")) offs.push_back(get_num(o));
          r = GapRule::explicit_list(std::move(offs), acc, side);
          break;
        }
        case GapRuleKind::Geometric:
          if (jr.contains("law")) {
            r = GapRule::custom(law_from(jr["law"]), law_from(jr.value("width", json::object({{"scale", 0.0}}))), acc, side);
            r.kind = kind;
            r.parameter = jr.contains("a") ? get_num(jr["a"]) : std::exp(r.law.rate);
          } else {
            r = GapRule::geometric(get_num(jr.at("a")), acc, side, jr.value("scale", 1.0));
          }
          break;
        case GapRuleKind::Power:
          if (jr.contains("law")) {
            r = GapRule::custom(law_from(jr["law"]), law_from(jr.value("width", json::object({{"scale", 0.0}}))), acc, side);
            r.kind = kind;
            r.parameter = jr.contains("p") ? get_num(jr["p"]) : r.law.power;
          } else {
            r = GapRule::power(get_num(jr.at("p")), acc, side, jr.value("scale", 1.0));
          }
          break;
        case GapRuleKind::CustomSequence:
          r = GapRule::custom(law_from(jr.at("law")),
                              law_from(jr.value("width", json::object({{"scale", 0.0}}))), acc, side);
          break;
      }
      if (r.is_sequence()) r.start = jr.value("start", std::int64_t{1});
      rules.push_back(std::move(r));
    }
    return CompactSet1D(std::move(intervals), std::move(rules), j.value("truncation_depth", 40));
  });
}

json to_json(const RegionSpec& spec) {
  json params = json::object();
  for (const auto& [k, v] : spec.params) params[k] = num(v);
  json j = {{"id", spec.id}, {"params", params}};
  if (spec.base) j["base"] = to_json(*spec.base);
  return j;
}

RegionSpec region_from_json(const json& j) {
  return guarded("region", [&] {
    RegionSpec s;
    s.id = j.at("id").get<std::string>();
    const json params = j.value("params", json::object());
    for (const auto& [k, v] : params.items()) s.params[k] = get_num(v);
    if (j.contains("base")) s.base = std::make_shared<RegionSpec>(region_from_json(j["base"]));
    return s;
  });
}

std::vector<std::int64_t> rle_encode(const std::vector<std::uint8_t>& bits) {
  std::vector<std::int64_t> runs;
  std::uint8_t cur = 0;
  std::int64_t n = 0;
  for (auto b : bits) {
    const std::uint8_t v = b ? 1 : 0;
    if (v == cur) {
      ++n;
    } else {
      runs.push_back(n);
      cur = v;
      n = 1;
    }
  }
  runs.push_back(n);
  return runs;
}

std::vector<std::uint8_t> rle_decode(const std::vector<std::int64_t>& runs, std::size_t size) {
  std::vector<std::uint8_t> bits;
  bits.reserve(size);
  std::uint8_t cur = 0;
  for (auto r : runs) {
    if (r < 0 || bits.size() + static_cast<std::size_t>(r) > size) throw ParseError("run lengths exceed the grid");
    bits.insert(bits.end(), static_cast<std::size_t>(r), cur);
    cur ^= 1;
  }
  if (bits.size() != size) throw ParseError("run lengths do not cover the grid");
  return bits;
}

json to_json(const RasterSet2D& set) {
  json j = {{"type", "raster_set_2d"},
            {"origin", point(set.origin())},
            {"h", num(set.h())},
            {"nx", set.nx()},
            {"ny", set.ny()},
            {"occupancy_rle", rle_encode(set.occupancy())}};
  if (!set.skeleton().empty()) j["skeleton_rle"] = rle_encode(set.skeleton());
  if (set.source()) j["source"] = to_json(*set.source());
  return j;
}

RasterSet2D raster_from_json(const json& j) {
  return guarded("raster", [&] {
    expect_type(j, "raster_set_2d");
    const int nx = j.at("nx").get<int>(), ny = j.at("ny").get<int>();
    require(nx > 0 && ny > 0, "grid extents must be positive");
    const auto size = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    auto occ = rle_decode(j.at("occupancy_rle").get<std::vector<std::int64_t>>(), size);
    std::vector<std::uint8_t> skel;
    if (j.contains("skeleton_rle")) skel = rle_decode(j["skeleton_rle"].get<std::vector<std::int64_t>>(), size);
    std::optional<RegionSpec> src;
    if (j.contains("source")) src = region_from_json(j["source"]);
    return RasterSet2D(point_from(j.at("origin")), get_num(j.at("h")), nx, ny, std::move(occ), std::move(skel),
                       std::move(src));
  });
}

json to_json(const Polyline& path) {
  json v = json::array();
  for (const auto& p : path.vertices()) v.push_back(point(p));
  return {{"type", "polyline"}, {"vertices", v}};
}

Polyline polyline_from_json(const json& j) {
  return guarded("polyline", [&] {
    expect_type(j, "polyline");
    const json& v = j.is_array() ? j : j.at("vertices");
    std::vector<Point2> pts;
    for (const auto& p : v) pts.push_back(point_from(p));
    require(pts.size() >= 2, "a polyline needs at least two vertices");
    for (const auto& p : pts) require(std::isfinite(p.x) && std::isfinite(p.y), "polyline coordinates must be finite");
    return Polyline(std::move(pts));
  });
}

json to_json(const SampledJet& jet) {
  json sites = json::array(), f = json::array(), df = json::array(), iso = json::array();
  for (std::size_t i = 0; i < jet.size(); ++i) {
    if (jet.dim == 1) {
      sites.push_back(num(jet.sites[i].x));
      df.push_back(num(jet.df[i].x));
    } else {
      sites.push_back(point(jet.sites[i]));
      df.push_back(point(jet.df[i]));
    }
    f.push_back(num(jet.f[i]));
    iso.push_back(jet.is_isolated(i));
  }
  return {{"type", "jet"}, {"dim", jet.dim}, {"sites", sites}, {"f", f},
          {"df", df},      {"isolated", iso}, {"set_ref", jet.set_ref}};
}

SampledJet jet_from_json(const json& j) {
  return guarded("jet", [&] {
    expect_type(j, "jet");
    SampledJet jet;
    jet.dim = j.value("dim", 2);
    require(jet.dim == 1 || jet.dim == 2, "jet dimension must be 1 or 2");
    for (const auto& s : j.at("sites")) jet.sites.push_back(point_from(s));
    for (const auto& v : j.at("f")) jet.f.push_back(get_num(v));
    for (const auto& d : j.at("df")) jet.df.push_back(point_from(d));
    if (j.contains("isolated"))
      for (const auto& b : j["isolated"]) jet.isolated.push_back(b.get<bool>() ? 1 : 0);
    jet.set_ref = j.value("set_ref", std::string());
    jet.validate();
    return jet;
  });
}

json to_json(const GridCharge& c) {
  return {{"type", "grid_charge"}, {"grid", grid_json(c.grid)}, {"cells", sparse_cells(c)}};
}

GridCharge charge_from_json(const json& j) {
  return guarded("charge", [&] {
    expect_type(j, "grid_charge");
    return charge_from_cells(grid_from(j.at("grid")), j.at("cells"));
  });
}

json to_json(const PathDecomposition& d) {
  return {{"type", "path_decomposition"},
          {"grid", grid_json(d.grid)},
          {"mode", d.mode == ArithmeticMode::Exact ? "exact" : "float"},
          {"entries", path_entries(d.entries, d.grid)},
          {"cycles", path_entries(d.cycles, d.grid)},
          {"residual", sparse_cells(d.residual)},
          {"variation_defect", num(d.variation_defect)},
          {"l2_excess", num(d.l2_excess)}};
}

PathDecomposition decomposition_from_json(const json& j) {
  return guarded("decomposition", [&] {
    expect_type(j, "path_decomposition");
    PathDecomposition d;
    d.grid = grid_from(j.at("grid"));
    const auto mode = j.value("mode", std::string("float"));
    require(mode == "float" || mode == "exact", "mode must be float or exact");
    d.mode = mode == "exact" ? ArithmeticMode::Exact : ArithmeticMode::Float;
    d.entries = entries_from(j.at("entries"), d.grid);
    d.cycles = entries_from(j.value("cycles", json::array()), d.grid);
    d.residual = charge_from_cells(d.grid, j.value("residual", json::array()));
    d.variation_defect = j.contains("variation_defect") ? get_num(j["variation_defect"]) : 0.0;
    d.l2_excess = j.contains("l2_excess") ? get_num(j["l2_excess"]) : 0.0;
    return d;
  });
}

json to_json(const SigmaPolicy& p) {
  return {{"threshold", num(p.threshold)},         {"windows", p.windows},
          {"growth", num(p.growth)},               {"stabilization", num(p.stabilization)},
          {"max_window", p.max_window},            {"max_generation", p.max_generation}};
}

SigmaPolicy policy_from_json(const json& j, SigmaPolicy p) {
  return guarded("sigma policy", [&] {
    if (j.contains("threshold")) p.threshold = get_num(j["threshold"]);
    if (j.contains("windows")) p.windows = j["windows"].get<int>();
    if (j.contains("growth")) p.growth = get_num(j["growth"]);
    if (j.contains("stabilization")) p.stabilization = get_num(j["stabilization"]);
    if (j.contains("max_window")) p.max_window = j["max_window"].get<int>();
    if (j.contains("max_generation")) p.max_generation = j["max_generation"].get<int>();
    require(p.threshold > 0 && p.windows >= 1 && p.growth > 1.0 && p.stabilization > 0.0,
            "sigma policy needs threshold > 0, windows >= 1, growth > 1, stabilization > 0");
    require(p.max_window >= 3 && p.max_window <= 62, "max_window must be in [3, 62]");
    require(p.max_generation >= 3 && p.max_generation <= 18, "max_generation must be in [3, 18]");
    return p;
  });
}

json to_json(const SigmaVerdict& v) {
  json j = {{"kind", to_string(v.kind)}, {"policy", to_json(v.policy)}};
  if (v.kind == SigmaKind::Finite) {
    j["upper"] = num(v.upper);
    j["lower"] = num(v.lower);
  }
  return j;
}

json to_json(const SigmaResult& r) {
  json eps = json::array(), sig = json::array(), tail = json::array();
  for (double e : r.profile.eps_ladder) eps.push_back(num(e));
  for (double s : r.profile.sigma_eps) sig.push_back(num(s));
  for (double s : r.profile.tail_window_sups) tail.push_back(num(s));
  return {{"xi", num(r.profile.xi)},
          {"verdict", to_json(r.verdict)},
          {"profile", {{"source", r.profile.source}, {"eps", eps}, {"sigma_eps", sig}, {"tail_window_sups", tail}}}};
}

json to_json(const EqualityResult& r) {
  json sites = json::array();
  for (const auto& s : r.sites) sites.push_back({{"xi", num(s.xi)}, {"verdict", to_json(s.verdict)}});
  json j = {{"verdict", to_string(r.kind)}, {"sites", sites}};
  if (r.kind == EqualityKind::NotEqual) j["witness"] = num(r.witness);
  return j;
}

json to_json(const CompletenessVerdict& v) {
  auto series = [](const std::vector<double>& s) {
    json a = json::array();
    for (double x : s) a.push_back(num(x));
    return a;
  };
  auto grade = [](const SeriesGrade& g) {
    return json{{"diverging", g.diverging}, {"bounded", g.bounded}, {"min_growth", num(g.min_growth)}};
  };
  json j = {{"verdict", to_string(v.kind)}, {"reason", v.reason}};
  if (!v.h_series.empty()) {
    j["h"] = series(v.h_series);
    j["pointwise_series"] = series(v.pointwise_series);
    j["local_series"] = series(v.local_series);
    j["pointwise_grade"] = grade(v.pointwise_grade);
    j["local_grade"] = grade(v.local_grade);
  }
  return j;
}

json to_json(const NormReport& r) {
  return {{"sup_f", num(r.sup_f)}, {"sup_df", num(r.sup_df)}, {"lip", num(r.lip)},
          {"lip_witness", {r.lip_i, r.lip_j}}, {"j1", num(r.j1)}, {"e1", num(r.e1)},
          {"c1_upper", num(r.c1_upper)}};
}

json to_json(const UniformConstant& u) {
  return {{"value", num(u.value)}, {"pair", {u.a, u.b}}, {"sources", u.sources}, {"sampled", u.sampled}};
}

json to_json(const Counterexample& c) {
  json gaps = json::array();
  for (const auto& g : c.gaps)
    gaps.push_back({{"n", g.n}, {"a", num(g.a)}, {"b", num(g.b)}, {"y", num(g.y)}, {"index", g.index}});
  return {{"xi", num(c.xi)}, {"gaps", gaps}, {"jet", to_json(c.jet)}};
}

json to_json(const RunConfig& c) {
  return {{"tolerance", num(c.tolerance)},
          {"cell_budget", c.cell_budget},
          {"sigma_policy", to_json(c.sigma)},
          {"arithmetic_mode", c.mode == ArithmeticMode::Exact ? "exact" : "float"},
          {"seed", c.seed},
          {"order", c.order},
          {"refinements", c.refinements}};
}

RunConfig config_from_json(const json& j, RunConfig c) {
  return guarded("config", [&] {
    if (!j.is_object()) throw ParseError("config must be an object");
    if (j.contains("tolerance")) c.tolerance = get_num(j["tolerance"]);
    if (j.contains("cell_budget")) c.cell_budget = j["cell_budget"].get<std::int64_t>();
    if (j.contains("sigma_policy")) c.sigma = policy_from_json(j["sigma_policy"], c.sigma);
    if (j.contains("arithmetic_mode")) {
      const auto m = j["arithmetic_mode"].get<std::string>();
      require(m == "float" || m == "exact", "arithmetic_mode must be float or exact");
      c.mode = m == "exact" ? ArithmeticMode::Exact : ArithmeticMode::Float;
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("order")) c.order = j["order"].get<int>();
    if (j.contains("refinements")) c.refinements = j["refinements"].get<int>();
    require(c.tolerance > 0.0, "tolerance must be positive");
    require(c.cell_budget > 0, "cell budget must be positive");
    require(c.order == 8 || c.order == 16, "order must be 8 or 16");
    require(c.refinements >= 1 && c.refinements <= 6, "refinements must be in [1, 6]");
    return c;
  });
}

void apply_env(RunConfig& c) {
  if (const char* v = std::getenv("C1K_CELL_BUDGET")) {
    char* end = nullptr;
    const long long b = std::strtoll(v, &end, 10);
    require(end && *end == '\0' && b > 0, "C1K_CELL_BUDGET must be a positive integer");
    c.cell_budget = b;
  }
}

json make_report(const std::string& command, const RunConfig& config,
                 const std::vector<std::pair<std::string, std::string>>& input_hashes, const json& result) {
  const json cfg = to_json(config);
  json inputs = json::array();
  for (const auto& [name, hash] : input_hashes) inputs.push_back({{"name", name}, {"fnv1a64", hash}});
  return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"command", command},
          {"config", cfg},
          {"config_hash", fnv1a64(cfg.dump())},
          {"inputs", inputs},
          {"result", result}};
}

}  // namespace c1k
