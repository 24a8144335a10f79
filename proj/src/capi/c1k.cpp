#include "c1k/c1k.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <variant>

#include "c1k/gallery.hpp"
#include "c1k/io.hpp"

using namespace c1k;

struct c1k_context {
  RunConfig config;
  std::string error;
};

struct c1k_set {
  std::variant<CompactSet1D, RasterSet2D> value;
};

struct c1k_jet {
  SampledJet jet;
};

struct c1k_charge {
  GridCharge charge;
};

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
c1k_status guard(c1k_context* ctx, F&& fn) {
  if (ctx == nullptr) return C1K_USAGE;
  ctx->error.clear();
  try {
    return fn();
  } catch (const UsageError& e) {
    ctx->error = e.what();
    return C1K_USAGE;
  } catch (const ContractError& e) {
    ctx->error = e.what();
    return C1K_CONTRACT;
  } catch (const ParseError& e) {
    ctx->error = e.what();
    return C1K_PARSE;
  } catch (const json::exception& e) {
    ctx->error = e.what();
    return C1K_PARSE;
  } catch (const std::bad_alloc&) {
    ctx->error = "out of memory";
    return C1K_INTERNAL;
  } catch (const std::exception& e) {
    ctx->error = std::string("internal error: ") + e.what();
    return C1K_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw UsageError(std::string(what) + " is null");
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

c1k_status emit(const json& j, char** out, c1k_status status = C1K_OK) {
  *out = dup(dump(j));
  return status;
}

const CompactSet1D& as_1d(const c1k_set* s) {
  const auto* v = std::get_if<CompactSet1D>(&s->value);
  require(v != nullptr, "this operation needs a one-dimensional set");
  return *v;
}

const RasterSet2D& as_raster(const c1k_set* s) {
  const auto* v = std::get_if<RasterSet2D>(&s->value);
  require(v != nullptr, "this operation needs a raster set");
  return *v;
}

Params params_from(const char* text) {
  Params p;
  if (text == nullptr || *text == '\0') return p;
  const json j = parse_document(text);
  if (!j.is_object()) throw ParseError("parameters must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "base") continue;
    if (!v.is_number() && !v.is_string()) throw ParseError("parameter " + k + " must be a number");
    p[k] = get_num(v);
  }
  return p;
}

double param(const Params& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int int_param(const Params& p, const char* key, int fallback) {
  const double v = param(p, key, fallback);
  require(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9,
          std::string("parameter ") + key + " must be an integer");
  return static_cast<int>(v);
}

Side side_param(const Params& p) {
  const int s = int_param(p, "side", 1);
  require(s >= -1 && s <= 1, "side must be -1 (left), 0 (both) or 1 (right)");
  return s < 0 ? Side::Left : (s == 0 ? Side::Both : Side::Right);
}

std::optional<CompactSet1D> build_1d(const std::string& spec, const Params& p) {
  const int depth = int_param(p, "depth", 40);
  const double acc = param(p, "accumulation", 0.0);
  const double scale = param(p, "scale", 1.0);
  if (spec == "geometric")
    return CompactSet1D({}, {GapRule::geometric(param(p, "a", 2.0), acc, side_param(p), scale)}, depth);
  if (spec == "power")
    return CompactSet1D({}, {GapRule::power(param(p, "p", 1.0), acc, side_param(p), scale)}, depth);
  if (spec == "cantor") {
    const int level = int_param(p, "level", 12);
    require(level >= 0 && level <= 22, "cantor level must be in [0, 22]");
    return CompactSet1D({}, {GapRule::cantor(level, param(p, "lo", 0.0), param(p, "hi", 1.0))}, depth);
  }
  if (spec == "interval") {
    const double lo = param(p, "lo", 0.0);
    const double hi = param(p, "hi", 1.0);
    require(lo <= hi, "interval needs lo <= hi");
    return CompactSet1D({{lo, hi}}, {}, depth);
  }
  if (spec == "isolated_sequence") return isolated_sequence_set(depth);
  if (spec == "regular_interval_sequence") {
    const int law = int_param(p, "law", 0);
    require(law == 0 || law == 1, "law must be 0 or 1");
    const SequenceLaw width{1.0, 0.0, 2.0};
    const SequenceLaw pos = law == 0 ? SequenceLaw{1.0, 0.0, 1.0} : SequenceLaw{1.0, 1.0, 0.0};
    return CompactSet1D({}, {GapRule::custom(pos, width)}, depth);
  }
  return std::nullopt;
}

json grade_json(const SeriesGrade& g) {
  return {{"diverging", g.diverging}, {"bounded", g.bounded}, {"min_growth", num(g.min_growth)}};
}

json series_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Point2 probe_or_default(double x, double y) {
  return {std::isfinite(x) ? x : 0.0, std::isfinite(y) ? y : 0.0};
}

struct FieldSpec {
  VectorField field;
  std::optional<ScalarField> potential;
};

FieldSpec parse_field(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> c;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw UsageError("bad field coefficient '" + tok + "'");
      }
    }
  }
  if (name == "constant" && c.size() == 2) {
    const double a = c[0], b = c[1];
    return {[=](Point2) { return Point2{a, b}; }, [=](Point2 p) { return a * p.x + b * p.y; }};
  }
  if (name == "linear" && c.size() == 4) {
    const double a = c[0], b = c[1], cc = c[2], d = c[3];
    FieldSpec f{[=](Point2 p) { return Point2{a * p.x + b * p.y, cc * p.x + d * p.y}; }, {}};
    if (b == cc)
      f.potential = [=](Point2 p) { return 0.5 * a * p.x * p.x + b * p.x * p.y + 0.5 * d * p.y * p.y; };
    return f;
  }
  if (name == "gradient-xy" && c.empty())
    return {[](Point2 p) { return Point2{p.y, p.x}; }, [](Point2 p) { return p.x * p.y; }};
  if (name == "rotation" && c.empty()) return {[](Point2 p) { return Point2{-p.y, p.x}; }, {}};
  throw UsageError("unknown field '" + spec +
                   "' (constant:a,b | linear:a,b,c,d | gradient-xy | rotation)");
}

json extension_json(const Extension& e, const std::string& mode, double param) {
  return {{"mode", mode},
          {"param", num(param)},
          {"sup_f_error", num(e.report.sup_f_error)},
          {"sup_df_error", num(e.report.sup_df_error)},
          {"squares", e.report.squares}};
}

}  // namespace

extern "C" {

const char* c1k_version(void) { return kToolVersion; }

c1k_status c1k_context_new(const char* config_json, c1k_context** out) {
  if (out == nullptr) return C1K_USAGE;
  *out = nullptr;
  auto* ctx = new (std::nothrow) c1k_context;
  if (ctx == nullptr) return C1K_INTERNAL;
  const c1k_status st = guard(ctx, [&] {
    if (config_json != nullptr && *config_json != '\0')
      ctx->config = config_from_json(parse_document(config_json));
    apply_env(ctx->config);
    return C1K_OK;
  });
  *out = ctx;  // returned even on failure so the caller can read the error
  return st;
}

void c1k_context_free(c1k_context* ctx) { delete ctx; }

const char* c1k_last_error(const c1k_context* ctx) {
  return ctx == nullptr ? "null context" : ctx->error.c_str();
}

c1k_status c1k_context_config(c1k_context* ctx, char** out_json) {
  return guard(ctx, [&] {
    need(out_json, "out");
    return emit(to_json(ctx->config), out_json);
  });
}

void c1k_string_free(char* s) { std::free(s); }

c1k_status c1k_fnv1a64(const char* data, size_t len, char** out) {
  if (out == nullptr || (data == nullptr && len > 0)) return C1K_USAGE;
  try {
    *out = dup(fnv1a64(std::string_view(data == nullptr ? "" : data, len)));
  } catch (const std::bad_alloc&) {
    return C1K_INTERNAL;
  }
  return C1K_OK;
}

c1k_status c1k_report(c1k_context* ctx, const char* command, const char* inputs_json,
                      const char* result_json, char** out) {
  return guard(ctx, [&] {
    need(command, "command");
    need(result_json, "result");
    need(out, "out");
    std::vector<std::pair<std::string, std::string>> inputs;
    if (inputs_json != nullptr && *inputs_json != '\0') {
      const json j = parse_document(inputs_json);
      if (!j.is_array()) throw ParseError("inputs must be an array");
      for (const auto& e : j) inputs.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    return emit(make_report(command, ctx->config, inputs, parse_document(result_json)), out);
  });
}

// ---- sets

c1k_status c1k_set_from_json(c1k_context* ctx, const char* text, c1k_set** out) {
  return guard(ctx, [&] {
    need(text, "json");
    need(out, "out");
    const json j = parse_document(text);
    if (!j.is_object() || !j.contains("type")) throw ParseError("set document needs a type");
    const auto type = j["type"].get<std::string>();
    if (type == "compact_set_1d")
      *out = new c1k_set{set1d_from_json(j)};
    else if (type == "raster_set_2d")
      *out = new c1k_set{raster_from_json(j)};
    else
      throw ParseError("unknown set type '" + type + "'");
    return C1K_OK;
  });
}

c1k_status c1k_set_build(c1k_context* ctx, const char* spec, const char* params_json, double h,
                         c1k_set** out) {
  return guard(ctx, [&] {
    need(spec, "spec");
    need(out, "out");
    const Params p = params_from(params_json);
    if (auto s = build_1d(spec, p)) {
      *out = new c1k_set{std::move(*s)};
      return C1K_OK;
    }
    const auto ids = region_ids();
    require(std::find(ids.begin(), ids.end(), spec) != ids.end(),
            std::string("unknown set spec '") + spec + "'");
    require(h > 0.0 && std::isfinite(h), "cell size h must be positive");
    RegionSpec rs;
    rs.id = spec;
    rs.params = p;
    if (params_json != nullptr && *params_json != '\0') {
      const json j = parse_document(params_json);
      if (j.contains("base")) rs.base = std::make_shared<RegionSpec>(region_from_json(j["base"]));
    }
    *out = new c1k_set{rasterize(rs, h, ctx->config.cell_budget)};
    return C1K_OK;
  });
}

c1k_status c1k_set_to_json(c1k_context* ctx, const c1k_set* set, char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    return emit(std::visit([](const auto& s) { return to_json(s); }, set->value), out);
  });
}

int c1k_set_dimension(const c1k_set* set) {
  if (set == nullptr) return 0;
  return std::holds_alternative<CompactSet1D>(set->value) ? 1 : 2;
}

c1k_status c1k_set_info(c1k_context* ctx, const c1k_set* set, char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    json j;
    if (const auto* s = std::get_if<CompactSet1D>(&set->value)) {
      const auto hull = s->hull();
      const auto cc = components(*s);
      j = {{"dimension", 1},
           {"hull", {num(hull.lo), num(hull.hi)}},
           {"materialized_intervals", s->materialized().size()},
           {"unresolved_regions", s->unresolved().size()},
           {"rules", s->rules().size()},
           {"components", cc.infinite_via_rule ? json("infinite") : json(cc.count)}};
    } else {
      const auto& r = std::get<RasterSet2D>(set->value);
      std::string cert;
      if (r.source()) cert = make_region(*r.source())->certificate();
      j = {{"dimension", 2},
           {"h", num(r.h())},
           {"nx", r.nx()},
           {"ny", r.ny()},
           {"origin", {num(r.origin().x), num(r.origin().y)}},
           {"occupied", r.occupied_count()},
           {"components", components(r).count},
           {"source", r.source() ? r.source()->id : ""},
           {"certificate", cert}};
    }
    return emit(j, out);
  });
}

void c1k_set_free(c1k_set* set) { delete set; }

// ---- one-dimensional structure

c1k_status c1k_sigma(c1k_context* ctx, const c1k_set* set, double xi, const char* policy_json,
                     char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    SigmaPolicy policy = ctx->config.sigma;
    if (policy_json != nullptr && *policy_json != '\0')
      policy = policy_from_json(parse_document(policy_json), policy);
    const auto r = sigma(as_1d(set), xi, policy);
    return emit(to_json(r), out,
                r.verdict.kind == SigmaKind::Inconclusive ? C1K_INCONCLUSIVE : C1K_OK);
  });
}

c1k_status c1k_decide_equality(c1k_context* ctx, const c1k_set* set, char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    const auto r = equality_c1_restriction(as_1d(set), ctx->config.sigma);
    return emit(to_json(r), out, r.kind == EqualityKind::Inconclusive ? C1K_INCONCLUSIVE : C1K_OK);
  });
}

c1k_status c1k_counterexample(c1k_context* ctx, const c1k_set* set, double xi, int windows,
                              char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    return emit(to_json(counterexample_function(as_1d(set), xi, windows)), out);
  });
}

// ---- intrinsic metric

c1k_status c1k_completeness(c1k_context* ctx, const c1k_set* set, double probe_x, double probe_y,
                            char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    CompletenessVerdict v;
    if (const auto* s = std::get_if<CompactSet1D>(&set->value)) {
      v = completeness_verdict(*s);
    } else {
      VerdictOptions opt;
      opt.refinements = ctx->config.refinements;
      opt.probe = probe_or_default(probe_x, probe_y);
      opt.order = ctx->config.order;
      opt.cell_budget = ctx->config.cell_budget;
      v = completeness_verdict(std::get<RasterSet2D>(set->value), opt);
    }
    return emit(to_json(v), out, v.kind == VerdictKind::EvidenceOnly ? C1K_INCONCLUSIVE : C1K_OK);
  });
}

c1k_status c1k_geodesic(c1k_context* ctx, const c1k_set* set, double sx, double sy, double tx,
                        double ty, double eps, int order, char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(out, "out");
    if (order == 0) order = ctx->config.order;
    if (order != 8 && order != 16) throw UsageError("order must be 8 or 16");
    const auto& raster = as_raster(set);
    const auto field = geodesic_distances(raster, {sx, sy}, eps, order);
    std::size_t reachable = 0;
    double max_dist = 0.0;
    for (double d : field.dist)
      if (std::isfinite(d)) {
        ++reachable;
        max_dist = std::max(max_dist, d);
      }
    const Point2 s = field.graph.center(field.source);
    json j = {{"source", {num(s.x), num(s.y)}},
              {"order", order},
              {"eps", num(eps)},
              {"graph_cells", field.graph.occupied_count()},
              {"reachable", reachable},
              {"max_distance", num(max_dist)}};
    if (std::isfinite(tx) && std::isfinite(ty)) {
      const int t = field.graph.nearest_occupied({tx, ty});
      require(t >= 0, "target has no occupied cell");
      const Point2 tc = field.graph.center(t);
      const double d = field.dist[t];
      json target = {{"cell", {num(tc.x), num(tc.y)}},
                     {"distance", num(d)},
                     {"euclidean", num(distance(s, tc))},
                     {"ratio", num(distance(s, tc) > 0 ? d / distance(s, tc) : 1.0)}};
      if (std::isfinite(d)) target["path"] = to_json(geodesic_path(field, t));
      j["target"] = target;
    }
    return emit(j, out);
  });
}

c1k_status c1k_regularity(c1k_context* ctx, const c1k_set* set, const char* mode, double px,
                          double py, double delta, int refinements, char** out) {
  return guard(ctx, [&] {
    need(set, "set");
    need(mode, "mode");
    need(out, "out");
    const std::string m = mode;
    if (m != "pointwise" && m != "uniform" && m != "interior" && m != "local")
      throw UsageError("mode must be pointwise, uniform, interior or local");
    const auto& base = as_raster(set);
    const Point2 p = probe_or_default(px, py);
    const int order = ctx->config.order;
    if (m != "uniform") require(delta > 0.0 && std::isfinite(delta), "delta must be positive");
    if (refinements < 0) refinements = ctx->config.refinements;
    require(refinements <= 8, "at most 8 refinements");
    const int levels = base.source() ? refinements + 1 : 1;
    std::vector<double> hs, values;
    json details = json::array();
    RasterSet2D level = base;
    for (int k = 0; k < levels; ++k) {
      if (k > 0) level = refine(level, 2, ctx->config.cell_budget);
      double v = 0.0;
      if (m == "pointwise") {
        v = whitney_constant_pointwise(level, p, {delta}, order).front();
      } else if (m == "interior") {
        v = interior_whitney_constant(level, p, delta, order);
      } else {
        const auto u = m == "uniform" ? whitney_constant_uniform(level, order)
                                      : local_whitney_constant(level, p, delta, delta, order);
        v = u.value;
        details.push_back(to_json(u));
      }
      hs.push_back(level.h());
      values.push_back(v);
    }
    json j = {{"mode", m},
              {"point", {num(p.x), num(p.y)}},
              {"delta", num(delta)},
              {"h_series", series_json(hs)},
              {"series", series_json(values)},
              {"grade", grade_json(grade_series(values))}};
    if (!details.empty()) j["details"] = details;
    return emit(j, out);
  });
}

// ---- paths

c1k_status c1k_path_integrate(c1k_context* ctx, const char* field_spec, const char* path_json,
                              int levels, char** out) {
  return guard(ctx, [&] {
    need(field_spec, "field");
    need(path_json, "path");
    need(out, "out");
    const auto field = parse_field(field_spec);
    const auto path = polyline_from_json(parse_document(path_json));
    if (levels <= 0) levels = 12;
    require(levels <= 24, "levels must be at most 24");
    const auto r = path_integral(field.field, path, levels, ctx->config.tolerance);
    json j = {{"field", field_spec},
              {"value", num(r.value)},
              {"refinement_levels", r.refinement_levels},
              {"last_delta", num(r.last_delta)},
              {"length", num(path.length())},
              {"closed", path.size() > 0 && path.front() == path.back()}};
    if (field.potential) {
      const double diff = (*field.potential)(path.back()) - (*field.potential)(path.front());
      j["potential_difference"] = num(diff);
      j["ftc_residual"] = num(std::abs(r.value - diff));
    }
    return emit(j, out);
  });
}

// ---- jets

c1k_status c1k_jet_from_json(c1k_context* ctx, const char* text, c1k_jet** out) {
  return guard(ctx, [&] {
    need(text, "json");
    need(out, "out");
    json j = parse_document(text);
    // Counterexample documents carry their jet under "jet".
    if (j.is_object() && !j.contains("sites") && j.contains("jet")) j = j["jet"];
    auto jet = jet_from_json(j);
    jet.validate();
    *out = new c1k_jet{std::move(jet)};
    return C1K_OK;
  });
}

c1k_status c1k_jet_from_csv(c1k_context* ctx, const char* csv, c1k_jet** out) {
  return guard(ctx, [&] {
    need(csv, "csv");
    need(out, "out");
    std::istringstream in(csv);
    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      std::vector<double> row;
      std::istringstream ls(line);
      std::string cell;
      bool numeric = true;
      while (std::getline(ls, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || std::string(end).find_first_not_of(" \t") != std::string::npos)
          numeric = false;
        row.push_back(v);
      }
      if (!numeric) {
        if (rows.empty() && lineno == 1) continue;  // header
        throw ParseError("csv line " + std::to_string(lineno) + " is not numeric");
      }
      if (row.size() != 3 && row.size() != 5)
        throw ParseError("csv line " + std::to_string(lineno) + " needs 3 or 5 columns");
      if (!rows.empty() && rows.front().size() != row.size())
        throw ParseError("csv line " + std::to_string(lineno) + " changes the column count");
      rows.push_back(std::move(row));
    }
    require(!rows.empty(), "csv has no rows");
    SampledJet jet;
    jet.dim = rows.front().size() == 3 ? 1 : 2;
    for (const auto& r : rows) {
      if (jet.dim == 1) {
        jet.sites.push_back({r[0], 0.0});
        jet.f.push_back(r[1]);
        jet.df.push_back({r[2], 0.0});
      } else {
        jet.sites.push_back({r[0], r[1]});
        jet.f.push_back(r[2]);
        jet.df.push_back({r[3], r[4]});
      }
    }
    jet.validate();
    *out = new c1k_jet{std::move(jet)};
    return C1K_OK;
  });
}

c1k_status c1k_jet_to_json(c1k_context* ctx, const c1k_jet* jet, char** out) {
  return guard(ctx, [&] {
    need(jet, "jet");
    need(out, "out");
    return emit(to_json(jet->jet), out);
  });
}

c1k_status c1k_jet_verify(c1k_context* ctx, const c1k_jet* jet, int ladder_count, char** out) {
  return guard(ctx, [&] {
    need(jet, "jet");
    need(out, "out");
    if (ladder_count <= 0) ladder_count = 10;
    require(ladder_count <= 40, "ladder count must be at most 40");
    const auto& J = jet->jet;
    require(J.size() >= 2, "jet needs at least two sites");
    const auto ladder = default_ladder(site_diameter(J), ladder_count);
    constexpr std::size_t kMaxSampled = 2000;
    const std::size_t stride = (J.size() + kMaxSampled - 1) / kMaxSampled;
    std::vector<double> worst(ladder.size(), 0.0);
    std::size_t sampled = 0, monotone = 0;
    for (std::size_t i = 0; i < J.size(); i += stride) {
      const auto res = diff_residual_ladder(J, i, ladder);
      bool mono = true;
      for (std::size_t k = 0; k < res.size(); ++k) {
        worst[k] = std::max(worst[k], res[k]);
        if (k > 0 && res[k] > res[k - 1] * (1 + 1e-12) + 1e-15) mono = false;
      }
      ++sampled;
      monotone += mono ? 1 : 0;
    }
    json j = {{"sites", J.size()},
              {"sampled", sampled},
              {"ladder", series_json(ladder)},
              {"max_residual", series_json(worst)},
              {"monotone_sites", monotone},
              {"all_monotone", monotone == sampled}};
    return emit(j, out);
  });
}

c1k_status c1k_jet_norms(c1k_context* ctx, const c1k_jet* jet, char** out) {
  return guard(ctx, [&] {
    need(jet, "jet");
    need(out, "out");
    json j = to_json(norms(jet->jet));
    j["sites"] = jet->jet.size();
    return emit(j, out);
  });
}

c1k_status c1k_jet_extend(c1k_context* ctx, const c1k_jet* jet, const c1k_set* set,
                          const char* mode, double param, char** out) {
  return guard(ctx, [&] {
    need(jet, "jet");
    need(mode, "mode");
    need(out, "out");
    const std::string m = mode;
    const auto& J = jet->jet;
    if (m == "pou") {
      require(J.size() > 0, "jet has no sites");
      Point2 lo = J.sites.front();
      for (const auto& s : J.sites) lo = {std::min(lo.x, s.x), std::min(lo.y, s.y)};
      const auto e = extend_partition_unity(J, lo, param);
      return emit(extension_json(*e, m, param), out);
    }
    if (m == "blowup") {
      need(set, "set");
      const auto e = extend_blowup(J, as_raster(set), param);
      return emit(extension_json(*e, m, param), out);
    }
    throw UsageError("extension mode must be pou or blowup");
  });
}

void c1k_jet_free(c1k_jet* jet) { delete jet; }

// ---- charges

c1k_status c1k_charge_from_json(c1k_context* ctx, const char* text, c1k_charge** out) {
  return guard(ctx, [&] {
    need(text, "json");
    need(out, "out");
    auto c = charge_from_json(parse_document(text));
    c.validate();
    *out = new c1k_charge{std::move(c)};
    return C1K_OK;
  });
}

c1k_status c1k_charge_from_path(c1k_context* ctx, const char* path_json, double ox, double oy,
                                double h, int nx, int ny, c1k_charge** out) {
  return guard(ctx, [&] {
    need(path_json, "path");
    need(out, "out");
    ChargeGrid grid{{ox, oy}, h, nx, ny};
    grid.validate();
    *out = new c1k_charge{charge_of_path(polyline_from_json(parse_document(path_json)), grid)};
    return C1K_OK;
  });
}

c1k_status c1k_charge_to_json(c1k_context* ctx, const c1k_charge* charge, char** out) {
  return guard(ctx, [&] {
    need(charge, "charge");
    need(out, "out");
    return emit(to_json(charge->charge), out);
  });
}

c1k_status c1k_charge_info(c1k_context* ctx, const c1k_charge* charge, char** out) {
  return guard(ctx, [&] {
    need(charge, "charge");
    need(out, "out");
    const auto& c = charge->charge;
    const auto div = divergence(c);
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < c.mu1.size(); ++i) nonzero += (c.mu1[i] != 0 || c.mu2[i] != 0) ? 1 : 0;
    json j = {{"nx", c.grid.nx},
              {"ny", c.grid.ny},
              {"h", num(c.grid.h)},
              {"nonzero_cells", nonzero},
              {"variation", num(variation(c))},
              {"staggered_variation", num(staggered_variation(c))},
              {"divergence_total", num(div.total())},
              {"divergence_l1", num(div.l1())}};
    return emit(j, out);
  });
}

c1k_status c1k_charge_decompose(c1k_context* ctx, const c1k_charge* charge, int exact, char** out) {
  return guard(ctx, [&] {
    need(charge, "charge");
    need(out, "out");
    if (exact < -1 || exact > 1) throw UsageError("exact must be 1, 0 or -1");
    const ArithmeticMode mode = exact < 0 ? ctx->config.mode
                                          : (exact ? ArithmeticMode::Exact : ArithmeticMode::Float);
    return emit(to_json(decompose(charge->charge, mode)), out);
  });
}

c1k_status c1k_charge_check(c1k_context* ctx, const char* decomposition_json,
                            const c1k_charge* charge, char** out) {
  return guard(ctx, [&] {
    need(decomposition_json, "decomposition");
    need(charge, "charge");
    need(out, "out");
    const auto d = decomposition_from_json(parse_document(decomposition_json));
    const auto& c = charge->charge;
    require(d.grid == c.grid, "decomposition and charge grids differ");
    const double identity = divergence_identity_check(d, c);
    const auto back = reassemble(d);
    double reassembly = 0.0;
    for (std::size_t i = 0; i < c.mu1.size(); ++i)
      reassembly += std::abs(back.mu1[i] - c.mu1[i]) + std::abs(back.mu2[i] - c.mu2[i]);
    const double scale = std::max(1.0, staggered_variation(c) / c.grid.h);
    const double tol = d.mode == ArithmeticMode::Exact ? 0.0 : ctx->config.tolerance * scale;
    const double vtol = ctx->config.tolerance * std::max(1.0, staggered_variation(c));
    json j = {{"mode", d.mode == ArithmeticMode::Exact ? "exact" : "float"},
              {"paths", d.entries.size()},
              {"cycles", d.cycles.size()},
              {"identity_residual", num(identity)},
              {"reassembly_error", num(reassembly)},
              {"variation_defect", num(d.variation_defect)},
              {"l2_excess", num(d.l2_excess)},
              {"tolerance", num(tol)},
              {"pass", identity <= tol && reassembly <= vtol &&
                           std::abs(d.variation_defect) <= vtol}};
    return emit(j, out);
  });
}

void c1k_charge_free(c1k_charge* charge) { delete charge; }

// ---- gallery

c1k_status c1k_gallery_list(c1k_context* ctx, char** out) {
  return guard(ctx, [&] {
    need(out, "out");
    json a = json::array();
    for (const auto& e : gallery_examples()) {
      json d = json::object();
      for (const auto& [k, v] : e.defaults) d[k] = num(v);
      a.push_back({{"id", e.id}, {"summary", e.summary}, {"defaults", d}});
    }
    return emit(a, out);
  });
}

c1k_status c1k_gallery_build(c1k_context* ctx, const char* id, const char* params_json, char** out) {
  return guard(ctx, [&] {
    need(id, "id");
    need(out, "out");
    return emit(to_json(build_example(id, params_from(params_json))), out);
  });
}

c1k_status c1k_gallery_run(c1k_context* ctx, const char* id, const char* params_json, char** out) {
  return guard(ctx, [&] {
    need(id, "id");
    need(out, "out");
    return emit(to_json(run_example(id, params_from(params_json))), out);
  });
}

}  // extern "C"
