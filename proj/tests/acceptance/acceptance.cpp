// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "c1k/gallery.hpp"

using namespace c1k;

namespace {

struct Outcome {
  bool pass = false;
  std::string measured;
};

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome sigma_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = sigma(*build_example("geometric", {{"a", 2.0}}).set1d, 0.0);
  const bool g_ok = g.verdict.kind == SigmaKind::Finite && g.verdict.upper >= 1.99 && g.verdict.upper <= 2.01 &&
                    g.verdict.lower >= 1.99 && g.verdict.lower <= 2.01;
  const auto p1 = sigma(*build_example("power", {{"p", 1.0}}).set1d, 0.0);
  const auto p2 = sigma(*build_example("power", {{"p", 2.0}}).set1d, 0.0);
  const auto eq = equality_c1_restriction(*build_example("cantor").set1d);
  std::size_t finite = 0;
  for (const auto& s : eq.sites)
    if (s.verdict.kind != SigmaKind::Infinite) ++finite;
  const double secs = seconds_since(t0);
  const bool ok = g_ok && p1.verdict.kind == SigmaKind::Infinite && p2.verdict.kind == SigmaKind::Infinite &&
                  eq.kind == EqualityKind::NotEqual && finite == 0 && secs < 5.0;
  return {ok, "geometric " + to_string(g.verdict.kind) + " [" + fmt(g.verdict.lower) + ", " + fmt(g.verdict.upper) +
                  "] (closed form 2); power p=1 " + to_string(p1.verdict.kind) + ", p=2 " +
                  to_string(p2.verdict.kind) + "; cantor " + to_string(eq.kind) + " with " +
                  std::to_string(eq.sites.size() - finite) + "/" + std::to_string(eq.sites.size()) +
                  " sites Infinite; " + fmt(secs) + " s"};
}

Outcome sauter() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = build_example("sauter");
  const ScalarField f = [](Point2 p) { return cantor_function(p.x); };
  const VectorField df = [](Point2) { return Point2{0.0, 0.0}; };
  const Polyline& path = *a.path;
  // The line must cross the fence through K, away from every removed ball.
  double clearance = kInf;
  for (const auto& b : sauter_balls(static_cast<int>(a.params.at("generations")), a.params.at("c")))
    clearance = std::min(clearance, std::abs(b.c.y - path.front().y) - b.r);
  const double integral = path_integral(df, path, 12).value;
  const double inc = f(path.back()) - f(path.front());
  const auto mv = mean_value_check(f, df, path);
  const double secs = seconds_since(t0);
  const bool ok = clearance > 0.0 && std::abs(integral) <= 1e-9 && inc == 1.0 && !mv.satisfied && secs < 5.0;
  return {ok, "integral " + fmt(integral) + ", F(end) - F(start) = " + fmt(inc) + ", mean value " +
                  (mv.satisfied ? "satisfied" : "violated") + " (" + fmt(mv.lhs) + " > " + fmt(mv.rhs) +
                  "), clearance " + fmt(clearance) + "; " + fmt(secs) + " s"};
}

Outcome ftc_suite() {
  std::mt19937_64 rng(3);
  const std::vector<std::string> regions = {"disk", "square", "annulus", "disk_with_holes"};
  const std::vector<double> hs = {1.0 / 16, 1.0 / 24, 1.0 / 32};
  double worst = 0.0;
  int done = 0, attempts = 0;
  std::size_t vertices = 0;
  while (done < 200 && attempts < 2000) {
    ++attempts;
    RegionSpec spec;
    spec.id = regions[done % regions.size()];
    const RasterSet2D r = rasterize(spec, hs[uniform_int(rng, 0, 2)]);
    const auto cells = r.occupied_cells();
    const int src = cells[uniform_int(rng, 0, static_cast<int>(cells.size()) - 1)];
    const int dst = cells[uniform_int(rng, 0, static_cast<int>(cells.size()) - 1)];
    const auto field = geodesic_distances(r, r.center(src));
    if (dst == src || !std::isfinite(field.dist[dst])) continue;
    const Polyline path = geodesic_path(field, dst);
    double c[6];
    for (double& v : c) v = uniform(rng, -3.0, 3.0);
    const ScalarField phi = [c](Point2 p) {
      return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y;
    };
    const VectorField grad = [c](Point2 p) {
      return Point2{c[1] + 2 * c[3] * p.x + c[4] * p.y, c[2] + c[4] * p.x + 2 * c[5] * p.y};
    };
    const SampledJet jet = sample_jet(r, phi, grad);
    worst = std::max(worst, jet_ftc_residual(jet, path, 12));
    worst = std::max(worst, ftc_residual(phi, grad, path, 12));
    vertices += path.size();
    ++done;
  }
  return {done == 200 && worst <= 1e-6,
          std::to_string(done) + " jets, mean path " + fmt(static_cast<double>(vertices) / std::max(done, 1)) +
              " vertices, max residual " + fmt(worst)};
}

Outcome cusp() {
  // Uniform constant near the tip over h = 2^-5, 2^-6, 2^-7.
  const RasterSet2D base = rasterize({"cusp", {{"depth", 20.0}}, nullptr}, 1.0 / 32);
  VerdictOptions opt;
  opt.refinements = 2;
  const auto v = completeness_verdict(base, opt);
  std::string series, growth;
  double min_growth = kInf;
  for (std::size_t k = 0; k < v.local_series.size(); ++k) {
    series += (k ? ", " : "") + fmt(v.local_series[k]);
    if (k) {
      const double g = v.local_series[k] / v.local_series[k - 1];
      min_growth = std::min(min_growth, g);
      growth += (k > 1 ? ", " : "") + fmt(g);
    }
  }
  const bool growth_ok = v.local_series.size() == 3 && min_growth >= 2.0;

  const auto a = build_example("cusp", {{"depth", 20.0}});
  const auto& jet = a.jets.front().second;
  const double lip = norms(jet).lip;
  const std::size_t cells = a.raster->occupied_count();
  std::vector<double> ladder;
  for (int k = 3; k <= 12; ++k) ladder.push_back(std::ldexp(1.0, -k));
  std::size_t bad = 0, ladders = 0;
  for (std::size_t x = 0; x < jet.size(); x += (x < cells ? 53 : 1)) {
    const auto r = diff_residual_ladder(jet, x, ladder);
    for (std::size_t k = 1; k < r.size(); ++k)
      if (r[k] > r[k - 1]) ++bad;
    ++ladders;
  }
  return {growth_ok && lip > 1e3 && bad == 0,
          "local constants " + series + " (growth " + growth + ", need >= 2); lip " + fmt(lip) + "; " +
              std::to_string(ladders) + " ladders, " + std::to_string(bad) + " increases"};
}

Outcome product() {
  const int depth = 24;
  const SampledJet jet = product_jet(depth);
  SiteIndex index(jet.sites, 0.01);
  auto quotient = [&](int n) {
    const long i = index.find({std::ldexp(1.0, -n), 1.0 / n}, 0.0);
    const long j = index.find({std::ldexp(1.0, -n + 1), 1.0 / n}, 0.0);
    if (i < 0 || j < 0) return std::numeric_limits<double>::quiet_NaN();
    return std::abs(jet.f[i] - jet.f[j]) / distance(jet.sites[i], jet.sites[j]);
  };
  double worst = 0.0;
  std::string values;
  for (int n : {10, 15, 20}) {
    const double q = quotient(n);
    const double expect = std::ldexp(1.0, n) / (static_cast<double>(n) * n * n);
    worst = std::isnan(q) ? kInf : std::max(worst, std::abs(q - expect) / expect);
    values += "n=" + std::to_string(n) + ": " + fmt(q) + " ";
  }
  int first = -1;
  for (int n = 10; n <= depth && first < 0; ++n)
    if (quotient(n) > 1e3) first = n;
  const double q20 = quotient(20);
  return {worst <= 1e-9 && q20 > 1e3, values + "(max rel error " + fmt(worst) + "); exceeds 1e3 first at n=" +
                                          std::to_string(first) + ", need n <= 20"};
}

Outcome counterexample() {
  const int windows = 30;
  const auto ce = counterexample_function(*build_example("power", {{"p", 1.0}}).set1d, 0.0, windows);
  const auto& jet = ce.jet;
  const double f0 = ce.value_at(0.0);
  int bad_windows = 0;
  double worst = 0.0;  // max over windows of n * residual
  for (int n = 1; n <= windows; ++n) {
    const double hi = n == 1 ? kInf : ce.gaps[n - 2].y, lo = ce.gaps[n - 1].y;
    double res = 0.0;
    for (std::size_t i = 0; i < jet.size(); ++i) {
      const double x = jet.sites[i].x;
      if (x > lo && x < hi) res = std::max(res, std::abs(jet.f[i] - f0) / x);
    }
    if (res > 1.0 / n) ++bad_windows;
    worst = std::max(worst, n * res);
  }
  double q_min = kInf;
  // One extra gap closes the last window; its near end lies below every window.
  for (int n = 1; n <= windows; ++n) {
    const auto& g = ce.gaps[n - 1];
    q_min = std::min(q_min, std::abs(ce.value_at(g.b) - ce.value_at(g.a)) / (g.b - g.a));
  }
  return {bad_windows == 0 && q_min >= 1.0,
          std::to_string(windows) + " windows, max n*residual " + fmt(worst) + ", " + std::to_string(bad_windows) +
              " windows over 1/n; " + std::to_string(ce.gaps.size()) + " gaps, min quotient " + fmt(q_min)};
}

Outcome conservation() {
  std::mt19937_64 rng(7);
  ChargeGrid g;
  g.nx = g.ny = 16;
  g.h = 1.0 / 16;
  double worst_identity = 0.0, worst_defect = 0.0;
  std::size_t paths = 0, cycles = 0;
  for (int t = 0; t < 100; ++t) {
    GridCharge c = GridCharge::zeros(g);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      c.mu1[k] = uniform_int(rng, -4, 4) * g.h;
      c.mu2[k] = uniform_int(rng, -4, 4) * g.h;
    }
    const auto d = decompose(c, ArithmeticMode::Exact);
    worst_identity = std::max(worst_identity, divergence_identity_check(d, c));
    cycles += d.cycles.size();
  }
  // Flow only to the right and upward: no directed cycles.
  for (int t = 0; t < 100; ++t) {
    GridCharge c = GridCharge::zeros(g);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      c.mu1[k] = uniform_int(rng, 0, 4) * g.h;
      c.mu2[k] = uniform_int(rng, 0, 4) * g.h;
    }
    for (const auto mode : {ArithmeticMode::Exact, ArithmeticMode::Float}) {
      const auto d = decompose(c, mode);
      worst_defect = std::max(worst_defect, std::abs(d.variation_defect));
      worst_identity = std::max(worst_identity, mode == ArithmeticMode::Exact ? divergence_identity_check(d, c) : 0.0);
      paths += d.entries.size();
    }
  }
  return {worst_identity == 0.0 && worst_defect <= 1e-9,
          "identity residual " + fmt(worst_identity) + " (exact, " + std::to_string(cycles) +
              " cycles found in signed instances); acyclic variation defect " + fmt(worst_defect) + " over " +
              std::to_string(paths) + " paths"};
}

Outcome annihilation() {
  std::mt19937_64 rng(8);
  std::vector<Polyline> paths;
  for (int t = 0; t < 50; ++t) {
    std::vector<Point2> v;
    const int n = uniform_int(rng, 2, 6);
    for (int k = 0; k < n; ++k) v.push_back({uniform(rng, 0.02, 0.98), uniform(rng, 0.02, 0.98)});
    paths.emplace_back(v);
  }
  std::vector<std::pair<ScalarField, VectorField>> phis;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> c(10);
    for (double& v : c) v = uniform(rng, -2.0, 2.0);
    phis.emplace_back(
        [c](Point2 p) {
          const double x = p.x, y = p.y;
          return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
                 c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
        },
        [c](Point2 p) {
          const double x = p.x, y = p.y;
          return Point2{c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y + c[8] * y * y,
                        c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y + 3 * c[9] * y * y};
        });
  }
  const std::vector<int> sizes = {16, 32, 64, 128};
  std::vector<double> totals, constants;
  for (int n : sizes) {
    // Paths live in the unit square; a quarter-width margin keeps their flow
    // off the last row and column, where it would leave the grid.
    ChargeGrid g;
    g.origin = {-0.25, -0.25};
    g.nx = g.ny = 3 * n / 2;
    g.h = 1.0 / n;
    double total = 0.0, worst = 0.0;
    for (const auto& path : paths) {
      const auto c = charge_of_path(path, g);
      for (const auto& [phi, grad] : phis) {
        const double d = std::abs(annihilation_defect(c, phi, grad));
        total += d;
        worst = std::max(worst, d);
      }
    }
    totals.push_back(total);
    constants.push_back(worst / g.h);
  }
  bool ok = true;
  std::string ratios, cs;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    cs += (k ? ", " : "") + fmt(constants[k]);
    if (k) {
      const double r = totals[k - 1] / totals[k];
      ok = ok && r >= 1.5 && r <= 3.0;
      ratios += (k > 1 ? ", " : "") + fmt(r);
    }
  }
  return {ok, "C = max|defect|/h at h = 1/16..1/128: " + cs + "; total defect ratio per halving " + ratios};
}

Outcome extension() {
  RegionSpec spec;
  spec.id = "disk";
  const RasterSet2D disk = rasterize(spec, 1.0 / 256);
  const SampledJet quad = sample_jet(disk, [](Point2 p) { return p.x * p.x + p.y * p.y; },
                                     [](Point2 p) { return Point2{2 * p.x, 2 * p.y}; });
  const SampledJet affine = sample_jet(disk, [](Point2 p) { return 0.5 - 1.5 * p.x + 2.25 * p.y; },
                                       [](Point2) { return Point2{-1.5, 2.25}; });
  std::mt19937_64 rng(9);
  std::vector<Point2> probes;
  while (probes.size() < 2000) {
    const Point2 p{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    if (p.x * p.x + p.y * p.y < 0.95) probes.push_back(p);
  }
  std::vector<double> errs;
  double affine_err = 0.0;
  for (int k = 3; k <= 6; ++k) {
    const double rho = std::ldexp(1.0, -k);
    errs.push_back(extend_partition_unity(quad, {0.0, 0.0}, rho)->report.sup_df_error);
    const auto ext = extend_partition_unity(affine, {0.0, 0.0}, rho);
    affine_err = std::max({affine_err, ext->report.sup_f_error, ext->report.sup_df_error});
    for (const Point2 p : probes) {
      affine_err = std::max(affine_err, std::abs(ext->value(p) - (0.5 - 1.5 * p.x + 2.25 * p.y)));
      affine_err = std::max(affine_err, norm(ext->gradient(p) - Point2{-1.5, 2.25}));
    }
  }
  bool ok = affine_err <= 1e-12;
  std::string es, ratios;
  for (std::size_t k = 0; k < errs.size(); ++k) {
    es += (k ? ", " : "") + fmt(errs[k]);
    if (k) {
      const double r = errs[k - 1] / errs[k];
      ok = ok && r >= 1.5 && r <= 3.0;
      ratios += (k > 1 ? ", " : "") + fmt(r);
    }
  }
  return {ok, "derivative error at rho = 2^-3..2^-6: " + es + " (ratios " + ratios + "); affine error " +
                  fmt(affine_err)};
}

Outcome metric() {
  std::mt19937_64 rng(10);
  RegionSpec spec;
  spec.id = "square";
  const RasterSet2D sq = rasterize(spec, 1.0 / 32);
  const auto cells = sq.occupied_cells();
  const int count = static_cast<int>(cells.size());
  std::vector<int> sources;
  for (int k = 0; k < 60; ++k) sources.push_back(cells[uniform_int(rng, 0, count - 1)]);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  std::vector<std::vector<double>> rows(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    DijkstraOptions opt;
    opt.order = 16;
    dijkstra(sq, sources[s], opt, rows[s]);
  }
  double worst_ratio = 0.0;
  std::size_t pairs = 0;
  for (std::size_t s = 0; s < sources.size(); ++s)
    for (int c : cells) {
      if (c == sources[s]) continue;
      worst_ratio = std::max(worst_ratio, rows[s][c] / distance(sq.center(sources[s]), sq.center(c)));
      ++pairs;
    }
  double asym = 0.0, tri = 0.0;
  const int ns = static_cast<int>(sources.size());
  for (int t = 0; t < 10000; ++t) {
    const int a = uniform_int(rng, 0, ns - 1), b = uniform_int(rng, 0, ns - 1), c = uniform_int(rng, 0, ns - 1);
    const double ab = rows[a][sources[b]], ba = rows[b][sources[a]];
    const double ac = rows[a][sources[c]], cb = rows[c][sources[b]];
    asym = std::max(asym, std::abs(ab - ba));
    tri = std::max(tri, ab - (ac + cb));
  }
  return {worst_ratio <= 1.03 && asym <= 1e-9 && tri <= 1e-9,
          "max ratio " + fmt(worst_ratio) + " over " + std::to_string(pairs) + " pairs; 10000 triples: asymmetry " +
              fmt(asym) + ", triangle excess " + fmt(tri)};
}

Outcome completeness() {
  std::string detail;
  bool ok = true;
  for (int depth : {20, 40}) {
    const auto v = completeness_verdict(isolated_sequence_set(depth));
    ok = ok && v.kind == VerdictKind::Incomplete;
    detail += "sequence depth " + std::to_string(depth) + ": " + to_string(v.kind) + "; ";
  }
  RegionSpec sq;
  sq.id = "square";
  for (int n : {16, 32}) {
    const auto v = completeness_verdict(rasterize(sq, 1.0 / n));
    ok = ok && v.kind == VerdictKind::Complete;
    detail += "square h=1/" + std::to_string(n) + ": " + to_string(v.kind) + "; ";
  }
  for (int n : {32, 64}) {
    const RasterSet2D base = rasterize({"cusp", {{"depth", 20.0}}, nullptr}, 1.0 / n);
    VerdictOptions opt;
    opt.refinements = 2;
    const auto v = completeness_verdict(base, opt);
    ok = ok && v.kind == VerdictKind::EvidenceOnly && v.local_grade.diverging;
    detail += "cusp base h=1/" + std::to_string(n) + ": " + to_string(v.kind) + ", growth " +
              fmt(v.local_grade.min_growth) + (v.local_grade.diverging ? " diverging" : " not diverging") +
              (n == 32 ? "; " : "");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"sigma decision suite", sigma_suite},
      {"sauter reproduction", sauter},
      {"ftc property suite", ftc_suite},
      {"cusp non-regularity", cusp},
      {"product witness quotient", product},
      {"counterexample synthesizer", counterexample},
      {"charge conservation", conservation},
      {"annihilation identity", annihilation},
      {"extension quality", extension},
      {"metric sanity", metric},
      {"completeness verdicts", completeness},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.measured.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed, %.1f s total\n", failed, criteria.size(), seconds_since(start));
  return failed == 0 ? 0 : 1;
}
