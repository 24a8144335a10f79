#include "c1k/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace c1k {

namespace {

struct Move {
  int dx, dy;
  double len;
  // Cells that must be present for knight moves (dx == 0 && dy == 0: unused).
  int ax, ay, bx, by;
};

const std::vector<Move>& moves(int order) {
  static const std::vector<Move> m8 = [] {
    std::vector<Move> v;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx || dy) v.push_back({dx, dy, std::hypot(dx, dy), 0, 0, 0, 0});
    return v;
  }();
  static const std::vector<Move> m16 = [] {
    std::vector<Move> v = m8;
    const int knights[8][2] = {{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
    for (auto& k : knights) {
      const int dx = k[0], dy = k[1];
      if (std::abs(dy) == 2)
        v.push_back({dx, dy, std::hypot(dx, dy), 0, dy / 2, dx, dy / 2});
      else
        v.push_back({dx, dy, std::hypot(dx, dy), dx / 2, 0, dx / 2, dy});
    }
    return v;
  }();
  require(order == 8 || order == 16, "neighborhood order must be 8 or 16");
  return order == 8 ? m8 : m16;
}

bool knight(const Move& m) { return std::abs(m.dx) + std::abs(m.dy) == 3; }

int require_source(const RasterSet2D& set, Point2 p) {
  const int idx = set.cell_of(p);
  require(idx >= 0 && set.occupied(idx), "source point is outside the set");
  return idx;
}

// Occupied cells within euclidean distance delta of the center of `src`.
std::vector<int> cells_within(const RasterSet2D& set, int src, double delta, bool include_src) {
  std::vector<int> out;
  const int k = static_cast<int>(std::ceil(delta / set.h()));
  const int si = set.col(src), sj = set.row(src);
  const Point2 c = set.center(src);
  for (int j = std::max(0, sj - k); j <= std::min(set.ny() - 1, sj + k); ++j) {
    for (int i = std::max(0, si - k); i <= std::min(set.nx() - 1, si + k); ++i) {
      const int idx = set.index(i, j);
      if (!set.occupied(idx)) continue;
      if (idx == src && !include_src) continue;
      if (distance(set.center(idx), c) <= delta * (1.0 + 1e-12)) out.push_back(idx);
    }
  }
  return out;
}

std::vector<int> stride_sample(std::vector<int> cells, std::size_t max_count) {
  if (cells.size() <= max_count) return cells;
  std::vector<int> out;
  const double step = static_cast<double>(cells.size()) / static_cast<double>(max_count);
  for (std::size_t k = 0; k < max_count; ++k)
    out.push_back(cells[static_cast<std::size_t>(std::floor(k * step))]);
  return out;
}

}  // namespace

void dijkstra(const RasterSet2D& set, int source, const DijkstraOptions& opt,
              std::vector<double>& dist, std::vector<int>* pred) {
  const auto& mv = moves(opt.order);
  const auto& allowed = opt.allowed ? *opt.allowed : set.occupancy();
  const int n = static_cast<int>(set.size());
  dist.assign(n, kInf);
  if (pred) pred->assign(n, -1);
  require(source >= 0 && source < n && allowed[source], "source is not a graph vertex");

  std::vector<std::uint8_t> is_target;
  std::size_t remaining = 0;
  if (!opt.targets.empty()) {
    is_target.assign(n, 0);
    for (int t : opt.targets)
      if (!is_target[t]) {
        is_target[t] = 1;
        ++remaining;
      }
  }
  std::vector<std::uint8_t> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  const double h = set.h();
  const int nx = set.nx();
  auto ok = [&](int i, int j) { return set.in_grid(i, j) && allowed[j * nx + i]; };
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (!is_target.empty() && is_target[u] && --remaining == 0) break;
    const int ui = u % nx, uj = u / nx;
    for (const auto& m : mv) {
      const int vi = ui + m.dx, vj = uj + m.dy;
      if (!ok(vi, vj)) continue;
      if (knight(m) && !(ok(ui + m.ax, uj + m.ay) && ok(ui + m.bx, uj + m.by))) continue;
      const int v = vj * nx + vi;
      const double nd = d + h * m.len;
      if (nd < dist[v]) {
        dist[v] = nd;
        if (pred) (*pred)[v] = u;
        pq.push({nd, v});
      }
    }
  }
}

GeodesicField geodesic_distances(const RasterSet2D& set, Point2 source, double eps, int order) {
  GeodesicField f;
  f.graph = dilate(set, eps);
  f.order = order;
  f.source = require_source(f.graph, source);
  DijkstraOptions opt;
  opt.order = order;
  dijkstra(f.graph, f.source, opt, f.dist, &f.pred);
  return f;
}

Polyline geodesic_path(const GeodesicField& field, int target) {
  require(target >= 0 && target < static_cast<int>(field.dist.size()) &&
              std::isfinite(field.dist[target]),
          "target is unreachable from the source");
  std::vector<Point2> pts;
  for (int c = target; c >= 0; c = field.pred[c]) pts.push_back(field.graph.center(c));
  std::reverse(pts.begin(), pts.end());
  if (pts.size() == 1) pts.push_back(pts.front());
  return Polyline(std::move(pts));
}

std::vector<double> whitney_constant_pointwise(const RasterSet2D& set, Point2 x,
                                               const std::vector<double>& ladder, int order) {
  require(!ladder.empty(), "delta ladder must be nonempty");
  const int src = require_source(set, x);
  const double dmax = *std::max_element(ladder.begin(), ladder.end());
  const double dmin = *std::min_element(ladder.begin(), ladder.end());
  DijkstraOptions opt;
  opt.order = order;
  opt.targets = cells_within(set, src, dmax, false);
  require(!cells_within(set, src, dmin, false).empty(), "no neighbor cells within the smallest delta");
  std::vector<double> dist;
  dijkstra(set, src, opt, dist);
  const Point2 c = set.center(src);
  std::vector<double> out(ladder.size(), 0.0);
  for (int t : opt.targets) {
    const double e = distance(set.center(t), c);
    const double ratio = dist[t] / e;
    for (std::size_t k = 0; k < ladder.size(); ++k)
      if (e <= ladder[k] * (1.0 + 1e-12)) out[k] = std::max(out[k], ratio);
  }
  return out;
}

UniformConstant whitney_constant_uniform(const RasterSet2D& set, int order, bool per_component,
                                         double pair_budget, std::size_t max_sources) {
  const auto comps = components(set);
  require(comps.count == 1 || per_component,
          "set is disconnected; request per-component constants");
  const auto cells = set.occupied_cells();
  std::vector<int> sources;
  UniformConstant u;
  const double n = static_cast<double>(cells.size());
  if (n * n <= pair_budget) {
    sources = cells;
  } else {
    for (int c : cells)
      if (set.boundary(c)) sources.push_back(c);
    sources = stride_sample(std::move(sources), max_sources);
    u.sampled = true;
  }
  u.sources = sources.size();
  DijkstraOptions opt;
  opt.order = order;
  std::vector<double> dist;
  for (int s : sources) {
    dijkstra(set, s, opt, dist);
    const Point2 cs = set.center(s);
    for (int t : cells) {
      if (t == s || !std::isfinite(dist[t])) continue;
      const double ratio = dist[t] / distance(cs, set.center(t));
      if (ratio > u.value) {
        u.value = ratio;
        u.a = s;
        u.b = t;
      }
    }
  }
  return u;
}

UniformConstant local_whitney_constant(const RasterSet2D& set, Point2 probe, double r,
                                       double delta, int order, std::size_t max_sources) {
  require(r > 0.0 && delta > 0.0, "radius and delta must be positive");
  std::vector<int> candidates;
  for (int c : set.occupied_cells())
    if (set.boundary(c) && distance(set.center(c), probe) <= r) candidates.push_back(c);
  require(!candidates.empty(), "no boundary cells near the probe");
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    const Point2 pa = set.center(a), pb = set.center(b);
    return std::tie(pa.x, pa.y) < std::tie(pb.x, pb.y);
  });

  UniformConstant u;
  DijkstraOptions opt;
  opt.order = order;
  std::vector<double> dist;
  std::vector<double> per(candidates.size(), -1.0);
  auto evaluate = [&](std::size_t k) {
    if (per[k] >= 0.0) return;
    const int s = candidates[k];
    opt.targets = cells_within(set, s, delta, false);
    double best = 1.0;
    int arg = -1;
    if (!opt.targets.empty()) {
      dijkstra(set, s, opt, dist);
      const Point2 cs = set.center(s);
      for (int t : opt.targets) {
        const double ratio = dist[t] / distance(cs, set.center(t));
        if (ratio > best) {
          best = ratio;
          arg = t;
        }
      }
    }
    per[k] = best;
    ++u.sources;
    if (best > u.value) {
      u.value = best;
      u.a = s;
      u.b = arg;
    }
  };

  // Coarse pass over an even subsample, then every candidate between the
  // neighbors of the best coarse source.
  const std::size_t n = candidates.size();
  const std::size_t stride = n <= max_sources ? 1 : (n + max_sources - 1) / max_sources;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n; k += stride) {
    evaluate(k);
    if (per[k] > per[best_k]) best_k = k;
  }
  if (stride > 1) {
    u.sampled = true;
    const std::size_t lo = best_k >= stride ? best_k - stride : 0;
    const std::size_t hi = std::min(n - 1, best_k + stride);
    for (std::size_t k = lo; k <= hi; ++k) evaluate(k);
  }
  return u;
}

double interior_whitney_constant(const RasterSet2D& set, Point2 x, double delta, int order) {
  const int src = require_source(set, x);
  std::vector<std::uint8_t> allowed(set.size(), 0);
  bool any = false;
  for (int c = 0; c < static_cast<int>(set.size()); ++c)
    if (set.interior(c)) {
      allowed[c] = 1;
      any = true;
    }
  require(any, "interior graph is empty");
  allowed[src] = 1;
  const auto targets = cells_within(set, src, delta, false);
  require(!targets.empty(), "no neighbor cells within delta");
  DijkstraOptions opt;
  opt.order = order;
  opt.allowed = &allowed;
  std::vector<double> dist;
  dijkstra(set, src, opt, dist);

  const auto& mv = moves(order);
  const Point2 c = set.center(src);
  const double h = set.h();
  double worst = 0.0;
  for (int t : targets) {
    double d = dist[t];
    if (!allowed[t]) {
      // y joins the graph only as an endpoint.
      const int ti = set.col(t), tj = set.row(t);
      auto ok = [&](int i, int j) {
        return set.in_grid(i, j) && (allowed[set.index(i, j)] || set.index(i, j) == t);
      };
      for (const auto& m : mv) {
        const int ni = ti - m.dx, nj = tj - m.dy;
        if (!set.in_grid(ni, nj) || !allowed[set.index(ni, nj)]) continue;
        if (knight(m) && !(ok(ni + m.ax, nj + m.ay) && ok(ni + m.bx, nj + m.by))) continue;
        d = std::min(d, dist[set.index(ni, nj)] + h * m.len);
      }
    }
    worst = std::max(worst, d / distance(set.center(t), c));
  }
  return worst;
}

SeriesGrade grade_series(const std::vector<double>& s, double growth) {
  SeriesGrade g;
  if (s.size() < 2) return g;
  bool all_inf = true;
  double min_growth = kInf;
  bool bounded = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::isfinite(s[k])) all_inf = false;
    if (k == 0) continue;
    const double ratio = std::isfinite(s[k - 1]) ? s[k] / s[k - 1] : (std::isfinite(s[k]) ? 0.0 : kInf);
    min_growth = std::min(min_growth, ratio);
    if (!(ratio <= 1.1 && ratio >= 1.0 / 1.1)) bounded = false;
  }
  g.min_growth = min_growth;
  g.diverging = all_inf || min_growth >= growth;
  g.bounded = bounded && !all_inf;
  return g;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Complete: return "Complete";
    case VerdictKind::Incomplete: return "Incomplete";
    case VerdictKind::EvidenceOnly: return "EvidenceOnly";
  }
  return "EvidenceOnly";
}

CompletenessVerdict completeness_verdict(const CompactSet1D& set) {
  CompletenessVerdict v;
  const auto c = components(set);
  if (c.infinite_via_rule) {
    v.kind = VerdictKind::Incomplete;
    v.reason = "infinitely many connected components";
  } else {
    v.kind = VerdictKind::Complete;
    v.reason = "finitely many intervals";
  }
  return v;
}

CompletenessVerdict completeness_verdict(const RasterSet2D& set, const VerdictOptions& opt) {
  CompletenessVerdict v;
  if (!set.source()) {
    v.reason = "no source descriptor; refinement evidence unavailable";
    return v;
  }
  const std::string cert = make_region(*set.source())->certificate();
  if (cert == "infinite_components") {
    v.kind = VerdictKind::Incomplete;
    v.reason = "infinitely many connected components";
    return v;
  }
  if (cert == "convex" || cert == "annulus" || cert == "disk_with_holes") {
    v.kind = VerdictKind::Complete;
    v.reason = "certificate: " + cert;
    return v;
  }
  for (int k = 0; k <= opt.refinements; ++k) {
    const RasterSet2D level = k == 0 ? set : refine(set, 1 << k, opt.cell_budget);
    const int x = level.nearest_occupied(opt.probe);
    v.h_series.push_back(level.h());
    v.pointwise_series.push_back(
        whitney_constant_pointwise(level, level.center(x), {opt.delta}, opt.order).front());
    v.local_series.push_back(
        local_whitney_constant(level, opt.probe, opt.radius, opt.delta, opt.order).value);
  }
  v.pointwise_grade = grade_series(v.pointwise_series);
  v.local_grade = grade_series(v.local_series);
  if (v.pointwise_grade.diverging) {
    v.kind = VerdictKind::Incomplete;
    v.reason = "pointwise constant diverges at the probe";
  } else if (v.local_grade.diverging) {
    v.kind = VerdictKind::EvidenceOnly;
    v.reason = "uniform constant diverges near the probe; pointwise constant bounded";
  } else {
    v.kind = VerdictKind::EvidenceOnly;
    v.reason = "bounded evidence";
  }
  return v;
}

}  // namespace c1k
