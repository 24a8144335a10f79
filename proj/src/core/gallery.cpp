#include "c1k/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace c1k {

namespace {

struct Range {
  double lo, hi;
  bool integer;
};

// Parameter ranges per example (defaults live in gallery_examples()).
const std::map<std::string, std::map<std::string, Range>>& ranges() {
  static const std::map<std::string, std::map<std::string, Range>> r = {
      {"cusp", {{"h", {1.0 / 512, 0.25, false}}, {"depth", {1, 40, true}}}},
      {"sauter", {{"generations", {0, 12, true}}, {"c", {1e-6, 0.2499, false}}, {"height", {0.0, 1.0, false}}}},
      {"incompleteness_sequence", {{"depth", {4, 60, true}}, {"n", {1, 15, true}}}},
      {"geometric", {{"a", {1.01, 1e6, false}}, {"depth", {1, 200, true}}}},
      {"power", {{"p", {0.1, 20, false}}, {"depth", {1, 200, true}}, {"windows", {1, 40, true}}}},
      {"cantor", {{"level", {1, 22, true}}}},
      {"product", {{"depth", {3, 40, true}}, {"h", {1.0 / 1024, 0.25, false}}}},
      {"disk_with_holes", {{"generations", {0, 12, true}}, {"h", {1.0 / 256, 0.125, false}}}},
      {"regular_interval_sequence", {{"law", {0, 1, true}}, {"depth", {1, 200, true}}}},
  };
  return r;
}

const ExampleInfo& info(const std::string& id) {
  for (const auto& e : gallery_examples())
    if (e.id == id) return e;
  throw ContractError("unknown gallery example: " + id);
}

Params resolve(const std::string& id, const Params& given) {
  Params p = info(id).defaults;
  const auto& rg = ranges().at(id);
  for (const auto& [k, v] : given) {
    auto it = rg.find(k);
    require(it != rg.end(), "unknown parameter '" + k + "' for " + id);
    require(std::isfinite(v) && v >= it->second.lo && v <= it->second.hi,
            "parameter '" + k + "' out of range for " + id);
    require(!it->second.integer || v == std::floor(v), "parameter '" + k + "' must be an integer");
    p[k] = v;
  }
  return p;
}

int as_int(const Params& p, const std::string& k) { return static_cast<int>(p.at(k)); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Checks {
 public:
  void add(std::string id, std::string kind, std::string expected, double measured, bool pass,
           std::string detail = {}) {
    out_.push_back({std::move(id), std::move(kind), std::move(expected), measured, pass, std::move(detail)});
  }
  // Runs fn; a thrown contract error is a failed check, never an aborted run.
  void guard(const std::string& id, const std::string& kind, const std::string& expected,
             const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(id, kind, expected, std::numeric_limits<double>::quiet_NaN(), false, e.what());
    }
  }
  std::vector<GalleryCheck> take() {
    std::sort(out_.begin(), out_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return std::move(out_);
  }

 private:
  std::vector<GalleryCheck> out_;
};

CompactSet1D geometric_set(double a, int depth) {
  return CompactSet1D({}, {GapRule::geometric(a)}, depth);
}

CompactSet1D power_set(double p, int depth) { return CompactSet1D({}, {GapRule::power(p)}, depth); }

CompactSet1D interval_sequence_set(int law, int depth) {
  const SequenceLaw width{1.0, 0.0, 2.0};  // e^{-2n}
  const SequenceLaw pos = law == 0 ? SequenceLaw{1.0, 0.0, 1.0} : SequenceLaw{1.0, 1.0, 0.0};
  return CompactSet1D({}, {GapRule::custom(pos, width)}, depth);
}

// f_n = identity on the first n+1 points 2^0 .. 2^-n, zero elsewhere.
SampledJet truncated_identity_jet(const CompactSet1D& set, int n, int depth) {
  SampledJet jet;
  jet.dim = 1;
  jet.sites.push_back({0.0, 0.0});
  jet.f.push_back(0.0);
  jet.df.push_back({0.0, 0.0});
  jet.isolated.push_back(0);
  for (int j = 0; j <= depth; ++j) {
    const double x = std::ldexp(1.0, -j);
    jet.sites.push_back({x, 0.0});
    jet.f.push_back(j <= n ? x : 0.0);
    jet.df.push_back({0.0, 0.0});
    jet.isolated.push_back(1);
  }
  jet.set_ref = fnv1a64(to_json(set).dump());
  return jet;
}

SampledJet difference(const SampledJet& a, const SampledJet& b) {
  SampledJet d = a;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.f[i] -= b.f[i];
    d.df[i] = d.df[i] - b.df[i];
  }
  return d;
}

}  // namespace

const std::vector<ExampleInfo>& gallery_examples() {
  static const std::vector<ExampleInfo> v = {
      {"cantor", "middle-third Cantor set: sigma is infinite everywhere", {{"level", 8}}},
      {"cusp", "square with an inward exponential cusp and a one-sided flat jet",
       {{"h", 1.0 / 128}, {"depth", 20}}},
      {"disk_with_holes", "unit disk with balls accumulating at a vertical wall",
       {{"generations", 8}, {"h", 1.0 / 64}}},
      {"geometric", "{0} u {a^-n}: finite sigma a/(a-1)", {{"a", 2}, {"depth", 40}}},
      {"incompleteness_sequence", "{0} u {2^-n} with truncated identity jets",
       {{"depth", 20}, {"n", 4}}},
      {"power", "{0} u {n^-p}: infinite sigma and the gap counterexample",
       {{"p", 1}, {"depth", 40}, {"windows", 30}}},
      {"product", "M x [0, 1] with tiny bumps on the segments", {{"depth", 20}, {"h", 1.0 / 64}}},
      {"regular_interval_sequence", "{0} u [x_n, x_n + e^-2n] with x_n = e^-n (law 0) or 1/n (law 1)",
       {{"law", 0}, {"depth", 40}}},
      {"sauter", "Cantor fence with removed balls: the interior FTC fails",
       {{"generations", 5}, {"c", 0.125}, {"height", 1.0 / 3}}},
  };
  return v;
}

bool GalleryReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

CompactSet1D isolated_sequence_set(int depth) {
  return CompactSet1D({}, {GapRule::geometric(2.0, 0.0, Side::Right, 2.0)}, depth + 1);
}

double cusp_f(Point2 p) { return p.x > 0.0 && p.y > 0.0 ? std::exp(-0.5 / p.x) : 0.0; }

Point2 cusp_df(Point2 p) {
  if (!(p.x > 0.0 && p.y > 0.0)) return {0.0, 0.0};
  return {std::exp(-0.5 / p.x) / (2.0 * p.x * p.x), 0.0};
}

SampledJet cusp_jet(const RasterSet2D& raster, int depth) {
  RegionSpec spec{"cusp", {{"depth", static_cast<double>(depth)}}, nullptr};
  std::vector<Point2> sites;
  for (int idx : raster.occupied_cells()) sites.push_back(raster.center(idx));
  for (const auto& p : make_region(spec)->probes()) sites.push_back(p);
  SampledJet jet = sample_jet(sites, cusp_f, cusp_df, 2);
  jet.set_ref = fnv1a64(to_json(raster).dump());
  return jet;
}

double product_bump(double t) { return 1.0 - smoothstep(2.0 * std::abs(t)); }

double product_bump_deriv(double t) {
  const double s = t < 0.0 ? -1.0 : 1.0;
  return -2.0 * s * smoothstep_deriv(2.0 * std::abs(t));
}

namespace {

int product_segment(double x, int depth) {
  for (int n = 1; n <= depth; ++n)
    if (x == std::ldexp(1.0, -n)) return n;
  return 0;
}

}  // namespace

double product_f(Point2 p, int depth) {
  const int n = product_segment(p.x, depth);
  if (n == 0) return 0.0;
  const double nn = n;
  return product_bump(nn * nn * (p.y - 1.0 / nn)) / (nn * nn * nn);
}

SampledJet product_jet(int depth, int samples) {
  std::vector<Point2> sites;
  std::vector<double> xs{0.0};
  for (int m = 0; m <= depth; ++m) xs.push_back(std::ldexp(1.0, -m));
  for (double x : xs) {
    std::vector<double> ys;
    for (int k = 0; k <= samples; ++k) ys.push_back(static_cast<double>(k) / samples);
    for (int n = 1; n <= depth + 1; ++n) ys.push_back(1.0 / n);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (double y : ys) sites.push_back({x, y});
  }
  auto f = [depth](Point2 p) { return product_f(p, depth); };
  auto df = [depth](Point2 p) -> Point2 {
    const int n = product_segment(p.x, depth);
    if (n == 0) return {0.0, 0.0};
    const double nn = n;
    return {0.0, product_bump_deriv(nn * nn * (p.y - 1.0 / nn)) / nn};
  };
  return sample_jet(sites, f, df, 2);
}

GalleryArtifacts build_example(const std::string& id, const Params& given) {
  GalleryArtifacts a;
  a.id = id;
  a.params = resolve(id, given);
  const Params& p = a.params;
  if (id == "cusp") {
    const int depth = as_int(p, "depth");
    a.raster = rasterize({"cusp", {{"depth", static_cast<double>(depth)}}, nullptr}, p.at("h"));
    a.jets.emplace_back("f", cusp_jet(*a.raster, depth));
  } else if (id == "sauter") {
    const RegionSpec spec{"sauter", {{"generations", p.at("generations")}, {"c", p.at("c")}}, nullptr};
    a.raster = rasterize(spec, 1.0 / 81);
    auto jet = sample_jet(*a.raster, [](Point2 q) { return cantor_function(q.x); },
                          [](Point2) { return Point2{0.0, 0.0}; });
    a.jets.emplace_back("cantor_function", std::move(jet));
    a.path = Polyline({{0.0, p.at("height")}, {1.0, p.at("height")}});
  } else if (id == "incompleteness_sequence") {
    const int depth = as_int(p, "depth"), n = as_int(p, "n");
    require(4 * n <= depth, "incompleteness_sequence needs 4 n <= depth");
    a.set1d = isolated_sequence_set(depth);
    for (int m : {n, 2 * n, 4 * n})
      a.jets.emplace_back("f_" + std::to_string(m), truncated_identity_jet(*a.set1d, m, depth));
  } else if (id == "geometric") {
    a.set1d = geometric_set(p.at("a"), as_int(p, "depth"));
  } else if (id == "power") {
    a.set1d = power_set(p.at("p"), as_int(p, "depth"));
  } else if (id == "cantor") {
    a.set1d = CompactSet1D({}, {GapRule::cantor(as_int(p, "level"))}, 40);
  } else if (id == "product") {
    const int depth = as_int(p, "depth");
    a.raster = rasterize({"product", {{"depth", static_cast<double>(depth)}}, nullptr}, p.at("h"));
    a.jets.emplace_back("bumps", product_jet(depth));
  } else if (id == "disk_with_holes") {
    a.raster = rasterize({"disk_with_holes", {{"generations", p.at("generations")}}, nullptr}, p.at("h"));
  } else if (id == "regular_interval_sequence") {
    a.set1d = interval_sequence_set(as_int(p, "law"), as_int(p, "depth"));
  } else {
    throw ContractError("unknown gallery example: " + id);
  }
  return a;
}


namespace {

void run_cusp(const GalleryArtifacts& a, Checks& c) {
  const auto& jet = a.jets.front().second;
  double left_max = 0.0;
  for (std::size_t i = 0; i < jet.size(); ++i)
    if (jet.sites[i].x <= 0.0) left_max = std::max(left_max, std::abs(jet.f[i]));
  c.add("jet_zero_for_nonpositive_x", "reference", "f = 0 where x <= 0", left_max, left_max == 0.0);

  const auto nr = norms(jet);
  c.add("lipschitz_exceeds_1e3", "reference", "> 1000", nr.lip, nr.lip > 1e3);
  const double df_max = 8.0 * std::exp(-2.0);  // max of e^{-1/2x} / 2x^2, at x = 1/4
  c.add("derivative_bounded", "sanity", "sup |df| <= 8 e^-2", nr.sup_df, nr.sup_df <= df_max * (1.0 + 1e-12));

  // Pointwise ladders on the lip probes and a stride sample of the cells.
  const std::size_t cells = a.raster->occupied_count();
  std::vector<std::size_t> sample;
  for (std::size_t i = cells; i < jet.size(); ++i) sample.push_back(i);
  for (std::size_t i = 0; i < cells; i += 97) sample.push_back(i);
  std::vector<double> ladder;
  for (int k = 3; k <= 12; ++k) ladder.push_back(std::ldexp(1.0, -k));
  std::size_t bad = 0;
  double worst_last = 0.0;
  for (std::size_t x : sample) {
    const auto r = diff_residual_ladder(jet, x, ladder);
    for (std::size_t k = 1; k < r.size(); ++k)
      if (r[k] > r[k - 1]) ++bad;
    worst_last = std::max(worst_last, r.back());
  }
  c.add("residual_ladders_monotone", "reference", "every ladder nonincreasing in delta",
        static_cast<double>(bad), bad == 0,
        std::to_string(sample.size()) + " sites; largest residual at the smallest radius " + fmt(worst_last));

  c.guard("completeness_evidence", "reference", "EvidenceOnly with a diverging local series", [&] {
    const RasterSet2D base = rasterize({"cusp", {{"depth", a.params.at("depth")}}, nullptr}, 1.0 / 32);
    VerdictOptions opt;
    opt.refinements = 2;
    const auto v = completeness_verdict(base, opt);
    std::string series;
    for (double s : v.local_series) series += fmt(s) + " ";
    c.add("completeness_evidence", "reference", "EvidenceOnly with a diverging local series",
          v.local_grade.min_growth, v.kind == VerdictKind::EvidenceOnly && v.local_grade.diverging,
          to_string(v.kind) + "; local series " + series);
  });
}

void run_sauter(const GalleryArtifacts& a, Checks& c) {
  const auto balls = sauter_balls(as_int(a.params, "generations"), a.params.at("c"));
  double diam = 0.0;
  for (const auto& b : balls) diam += 2.0 * b.r;
  c.add("ball_diameters_below_quarter", "reference", "< 0.25", diam, diam < 0.25);
  if (balls.size() <= 6000) {
    double gap = kInf;
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j)
        gap = std::min(gap, distance(balls[i].c, balls[j].c) - balls[i].r - balls[j].r);
    c.add("balls_disjoint", "sanity", "min separation > 0", gap, gap > 0.0);
  }
  const double height = a.params.at("height");
  double clearance = kInf;
  for (const auto& b : balls) clearance = std::min(clearance, std::abs(b.c.y - height) - b.r);
  c.add("line_avoids_balls", "sanity", "clearance > 0", clearance, clearance > 0.0);

  const ScalarField f = [](Point2 p) { return cantor_function(p.x); };
  const VectorField df = [](Point2) { return Point2{0.0, 0.0}; };
  const Polyline& path = *a.path;
  const auto integral = path_integral(df, path, 12);
  c.add("path_integral_zero", "reference", "0 within 1e-9", integral.value, std::abs(integral.value) <= 1e-9);
  const double inc = f(path.back()) - f(path.front());
  c.add("increment_one", "reference", "F(end) - F(start) = 1 exactly", inc, inc == 1.0);
  const double ftc = ftc_residual(f, df, path);
  c.add("ftc_defect", "reference", "1 within 1e-6", ftc, std::abs(ftc - 1.0) <= 1e-6);
  const auto mv = mean_value_check(f, df, path);
  c.add("mean_value_violated", "reference", "|f(b) - f(a)| > L sup|df|", mv.lhs - mv.rhs, !mv.satisfied);
}

void run_incompleteness(const GalleryArtifacts& a, Checks& c) {
  const auto& j1 = a.jets[0].second;
  const auto& j2 = a.jets[1].second;
  const auto& j4 = a.jets[2].second;
  const double d1 = norms(difference(j1, j2)).c1_upper;
  const double d2 = norms(difference(j2, j4)).c1_upper;
  c.add("cauchy_decay", "reference", "||f_2n - f_4n|| < ||f_n - f_2n||", d2 / d1, d2 < d1,
        "norms " + fmt(d1) + " then " + fmt(d2));

  const int depth = as_int(a.params, "depth");
  const SampledJet limit = truncated_identity_jet(*a.set1d, depth, depth);
  double dev = 0.0;
  for (std::size_t i = 1; i < limit.size(); ++i)
    dev = std::max(dev, std::abs(std::abs(limit.f[i] - limit.f[0]) / limit.sites[i].x - 1.0));
  c.add("limit_ratio_one", "reference", "|f(x_j) - f(x_0)| / |x_j - x_0| = 1 for every j", dev, dev == 0.0);

  const auto ladder = diff_residual_ladder(limit, 0, default_ladder(1.0, 12));
  const double floor_v = *std::min_element(ladder.begin(), ladder.end());
  c.add("limit_residual_stays_one", "sanity", "residual at 0 does not decay", floor_v, floor_v >= 1.0 - 1e-12);

  const auto v = completeness_verdict(*a.set1d);
  c.add("completeness_incomplete", "reference", "Incomplete", 0.0, v.kind == VerdictKind::Incomplete, v.reason);
}

void run_geometric(const GalleryArtifacts& a, Checks& c) {
  const double ar = a.params.at("a");
  const double expect = ar / (ar - 1.0);
  const auto s = sigma(*a.set1d, 0.0);
  const bool fin = s.verdict.kind == SigmaKind::Finite;
  c.add("sigma_value", "oracle", "Finite, " + fmt(expect) + " within 0.5%", fin ? s.verdict.upper : kInf,
        fin && std::abs(s.verdict.upper - expect) <= 0.005 * expect &&
            std::abs(s.verdict.lower - expect) <= 0.005 * expect,
        to_string(s.verdict.kind));
  const auto eq = equality_c1_restriction(*a.set1d);
  c.add("equality", "oracle", "Equal", static_cast<double>(eq.sites.size()), eq.kind == EqualityKind::Equal,
        to_string(eq.kind));
  bool rejected = false;
  std::string why;
  try {
    counterexample_function(*a.set1d, 0.0, 30);
  } catch (const ContractError& e) {
    rejected = true;
    why = e.what();
  }
  c.add("counterexample_rejected", "sanity", "gap extraction fails", 0.0, rejected, why);
}

void run_power(const GalleryArtifacts& a, Checks& c) {
  const auto s = sigma(*a.set1d, 0.0);
  c.add("sigma_infinite", "reference", "Infinite", 0.0, s.verdict.kind == SigmaKind::Infinite,
        to_string(s.verdict.kind));
  const auto eq = equality_c1_restriction(*a.set1d);
  c.add("equality", "reference", "NotEqual with witness 0", eq.witness,
        eq.kind == EqualityKind::NotEqual && eq.witness == 0.0, to_string(eq.kind));

  const int windows = as_int(a.params, "windows");
  c.guard("window_residual", "reference", "residual <= 1/n in every window", [&] {
    const auto ce = counterexample_function(*a.set1d, 0.0, windows);
    const auto& jet = ce.jet;
    double worst = 0.0;  // max over windows of n * residual
    for (int n = 1; n <= windows; ++n) {
      const double hi = n == 1 ? kInf : ce.gaps[n - 2].y, lo = ce.gaps[n - 1].y;
      for (std::size_t i = 0; i < jet.size(); ++i) {
        const double x = jet.sites[i].x;
        if (x > lo && x < hi) worst = std::max(worst, n * std::abs(jet.f[i] - ce.value_at(0.0)) / x);
      }
    }
    c.add("window_residual", "reference", "residual <= 1/n in every window", worst, worst <= 1.0 + 1e-12);
    double q_min = kInf;
    for (int n = 1; n <= windows; ++n) {
      const auto& g = ce.gaps[n - 1];
      q_min = std::min(q_min, std::abs(ce.value_at(g.b) - ce.value_at(g.a)) / (g.b - g.a));
    }
    c.add("gap_quotient", "reference", ">= 1 at every extracted gap", q_min, q_min >= 1.0);
    double mismatch = 0.0;
    for (std::size_t i = 0; i < jet.size(); ++i)
      mismatch = std::max(mismatch, std::abs(jet.f[i] - ce.value_at(jet.sites[i].x)));
    c.add("jet_matches_construction", "sanity", "jet values equal the window formula", mismatch, mismatch == 0.0);
    const auto wt = whitney_1d_test(jet, 0.0, {0.5, 0.25, 0.125, 0.0625});
    const double floor_v = *std::min_element(wt.begin(), wt.end());
    c.add("whitney_test_bounded_below", "sanity", "difference quotients stay >= 1 near 0", floor_v, floor_v >= 1.0);
  });
}

void run_cantor(const GalleryArtifacts& a, Checks& c) {
  const auto eq = equality_c1_restriction(*a.set1d);
  c.add("equality", "reference", "NotEqual", static_cast<double>(eq.sites.size()),
        eq.kind == EqualityKind::NotEqual, to_string(eq.kind));
  std::size_t finite = 0;
  for (const auto& s : eq.sites)
    if (s.verdict.kind != SigmaKind::Infinite) ++finite;
  c.add("all_sites_infinite", "reference", "every tested xi Infinite", static_cast<double>(finite), finite == 0,
        std::to_string(eq.sites.size()) + " sites");
  const auto s = sigma(*a.set1d, 0.25);
  c.add("sigma_quarter_infinite", "reference", "Infinite at xi = 1/4", 0.0, s.verdict.kind == SigmaKind::Infinite,
        to_string(s.verdict.kind));
}

void run_product(const GalleryArtifacts& a, Checks& c) {
  const auto& jet = a.jets.front().second;
  const int depth = as_int(a.params, "depth");
  SiteIndex index(jet.sites, 0.01);
  std::vector<double> qs;
  double worst = 0.0;
  for (int n : {10, 15, 20}) {
    if (n > depth) continue;
    const long i = index.find({std::ldexp(1.0, -n), 1.0 / n}, 0.0);
    const long j = index.find({std::ldexp(1.0, -n + 1), 1.0 / n}, 0.0);
    require(i >= 0 && j >= 0, "product witness sites missing");
    const double q = std::abs(jet.f[i] - jet.f[j]) / distance(jet.sites[i], jet.sites[j]);
    const double expect = std::ldexp(1.0, n) / (static_cast<double>(n) * n * n);
    worst = std::max(worst, std::abs(q - expect) / expect);
    qs.push_back(q);
  }
  c.add("witness_quotient_formula", "oracle", "n^-3 / 2^-n within 1e-9 at n = 10, 15, 20", worst, worst <= 1e-9);
  bool grows = true;
  for (std::size_t k = 1; k < qs.size(); ++k) grows = grows && qs[k] > qs[k - 1];
  c.add("witness_quotient_grows", "sanity", "increasing in n", qs.empty() ? 0.0 : qs.back(), grows);
  const auto nr = norms(jet);
  c.add("derivative_bounded", "sanity", "sup |df| <= 3.75", nr.sup_df, nr.sup_df <= 3.75 + 1e-12);
  const auto v = completeness_verdict(*a.raster);
  c.add("completeness_incomplete", "reference", "Incomplete", 0.0, v.kind == VerdictKind::Incomplete, v.reason);
}

void run_disk_with_holes(const GalleryArtifacts& a, Checks& c) {
  const auto balls = wall_balls(as_int(a.params, "generations"));
  double gap = kInf, reach = 0.0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    reach = std::max(reach, norm(balls[i].c) + balls[i].r);
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      gap = std::min(gap, distance(balls[i].c, balls[j].c) - balls[i].r - balls[j].r);
  }
  c.add("holes_disjoint_inside_disk", "sanity", "separation > 0 and holes inside the disk", gap,
        gap > 0.0 && reach < 1.0);
  const auto v = completeness_verdict(*a.raster);
  c.add("completeness_complete", "reference", "Complete", 0.0, v.kind == VerdictKind::Complete, v.reason);
  c.guard("wall_interior_constant", "sanity", "bounded across one refinement", [&] {
    const double c0 = interior_whitney_constant(*a.raster, {0.0, 0.0}, 0.25);
    const double c1 = interior_whitney_constant(refine(*a.raster, 2), {0.0, 0.0}, 0.25);
    c.add("wall_interior_constant", "sanity", "finite, growth < 1.25 across one refinement", c1,
          std::isfinite(c1) && c1 < 1.25 * c0, fmt(c0) + " then " + fmt(c1));
  });
}

void run_regular(const GalleryArtifacts& a, Checks& c) {
  const int law = as_int(a.params, "law");
  const auto s = sigma(*a.set1d, 0.0);
  const auto eq = equality_c1_restriction(*a.set1d);
  if (law == 0) {
    const double e = std::exp(1.0), expect = e / (e - 1.0);
    const bool fin = s.verdict.kind == SigmaKind::Finite;
    c.add("sigma_value", "oracle", "Finite, e/(e-1) within 1e-3", fin ? s.verdict.upper : kInf,
          fin && std::abs(s.verdict.upper - expect) <= 1e-3 * expect, to_string(s.verdict.kind));
    c.add("equality", "oracle", "Equal", 0.0, eq.kind == EqualityKind::Equal, to_string(eq.kind));
  } else {
    c.add("sigma_infinite", "oracle", "Infinite", 0.0, s.verdict.kind == SigmaKind::Infinite,
          to_string(s.verdict.kind));
    c.add("equality", "oracle", "NotEqual", 0.0, eq.kind == EqualityKind::NotEqual, to_string(eq.kind));
  }
}

}  // namespace

GalleryReport run_example(const std::string& id, const Params& params) {
  GalleryReport r;
  Checks c;
  const GalleryArtifacts a = build_example(id, params);
  r.id = id;
  r.params = a.params;
  if (id == "cusp") run_cusp(a, c);
  else if (id == "sauter") run_sauter(a, c);
  else if (id == "incompleteness_sequence") run_incompleteness(a, c);
  else if (id == "geometric") run_geometric(a, c);
  else if (id == "power") run_power(a, c);
  else if (id == "cantor") run_cantor(a, c);
  else if (id == "product") run_product(a, c);
  else if (id == "disk_with_holes") run_disk_with_holes(a, c);
  else if (id == "regular_interval_sequence") run_regular(a, c);
  r.checks = c.take();
  return r;
}

json to_json(const GalleryReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = num(v);
  json checks = json::array();
  for (const auto& ch : r.checks)
    checks.push_back({{"id", ch.id},
                      {"kind", ch.kind},
                      {"expected", ch.expected},
                      {"measured", num(ch.measured)},
                      {"pass", ch.pass},
                      {"detail", ch.detail}});
  return {{"id", r.id}, {"params", params}, {"passed", r.passed()}, {"checks", checks}};
}

json to_json(const GalleryArtifacts& a) {
  json params = json::object();
  for (const auto& [k, v] : a.params) params[k] = num(v);
  json j = {{"id", a.id}, {"params", params}};
  if (a.set1d) j["set"] = to_json(*a.set1d);
  if (a.raster) j["raster"] = to_json(*a.raster);
  if (a.path) j["path"] = to_json(*a.path);
  json jets = json::object();
  for (const auto& [name, jet] : a.jets) jets[name] = to_json(jet);
  j["jets"] = jets;
  return j;
}

}  // namespace c1k
