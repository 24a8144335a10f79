#include "c1k/charge.hpp"

#include <algorithm>
#include <cmath>

#include <boost/rational.hpp>

namespace c1k {

using Rational = boost::rational<std::int64_t>;

void ChargeGrid::validate() const {
  require(nx > 0 && ny > 0, "charge grid needs positive extents");
  require(std::isfinite(h) && h > 0.0, "charge grid spacing must be positive");
  require(std::isfinite(origin.x) && std::isfinite(origin.y), "charge grid origin must be finite");
  require(static_cast<double>(nx) * ny <= 1e8, "charge grid exceeds the cell budget");
}

GridCharge GridCharge::zeros(const ChargeGrid& g) {
  g.validate();
  GridCharge c;
  c.grid = g;
  c.mu1.assign(g.cells(), 0.0);
  c.mu2.assign(g.cells(), 0.0);
  return c;
}

void GridCharge::validate() const {
  grid.validate();
  require(mu1.size() == grid.cells() && mu2.size() == grid.cells(), "charge arrays do not match the grid");
  for (std::size_t k = 0; k < mu1.size(); ++k)
    require(std::isfinite(mu1[k]) && std::isfinite(mu2[k]), "charge masses must be finite");
}

GridCharge& GridCharge::operator+=(const GridCharge& o) {
  require(grid == o.grid, "charges live on different grids");
  for (std::size_t k = 0; k < mu1.size(); ++k) {
    mu1[k] += o.mu1[k];
    mu2[k] += o.mu2[k];
  }
  return *this;
}

GridCharge GridCharge::scaled(double s) const {
  GridCharge c = *this;
  for (auto& v : c.mu1) v *= s;
  for (auto& v : c.mu2) v *= s;
  return c;
}

double SignedGridMeasure::total() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

double SignedGridMeasure::l1() const {
  double s = 0.0;
  for (double m : mass) s += std::abs(m);
  return s;
}

SignedGridMeasure divergence(const GridCharge& c) {
  const auto& g = c.grid;
  SignedGridMeasure out{g, std::vector<double>(g.cells(), 0.0)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      double v = c.mu1[k] + c.mu2[k];
      if (i > 0) v -= c.mu1[g.index(i - 1, j)];
      if (j > 0) v -= c.mu2[g.index(i, j - 1)];
      out.mass[k] = v / g.h;
    }
  return out;
}

GridCharge charge_of_path(const Polyline& path, const ChargeGrid& grid) {
  GridCharge c = GridCharge::zeros(grid);
  const double tol = 1e-12 * grid.h;
  const double x1 = grid.origin.x + grid.nx * grid.h;
  const double y1 = grid.origin.y + grid.ny * grid.h;
  for (const auto& p : path.vertices())
    require(p.x >= grid.origin.x - tol && p.x <= x1 + tol && p.y >= grid.origin.y - tol && p.y <= y1 + tol,
            "path exits the charge grid");
  const auto& v = path.vertices();
  for (std::size_t s = 0; s + 1 < v.size(); ++s) {
    const Point2 p = v[s], d = v[s + 1] - v[s];
    if (d.x == 0.0 && d.y == 0.0) continue;
    // Crossing parameters with their points; the crossed coordinate is snapped to
    // the grid line so that cell increments are exact differences.
    std::vector<std::pair<double, Point2>> ts{{0.0, p}, {1.0, v[s + 1]}};
    auto crossings = [&](double p0, double dd, double o, bool along_x) {
      if (dd == 0.0) return;
      const double a = (p0 - o) / grid.h, b = (p0 + dd - o) / grid.h;
      for (double k = std::ceil(std::min(a, b)); k <= std::floor(std::max(a, b)); k += 1.0) {
        const double line = o + k * grid.h;
        const double t = (line - p0) / dd;
        if (!(t > 0.0 && t < 1.0)) continue;
        Point2 q = p + t * d;
        (along_x ? q.x : q.y) = line;
        ts.emplace_back(t, q);
      }
    };
    crossings(p.x, d.x, grid.origin.x, true);
    crossings(p.y, d.y, grid.origin.y, false);
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      if (ts[k + 1].first - ts[k].first <= 0.0) continue;
      const Point2 m = p + 0.5 * (ts[k].first + ts[k + 1].first) * d;
      const int i = std::clamp(static_cast<int>(std::floor((m.x - grid.origin.x) / grid.h)), 0, grid.nx - 1);
      const int j = std::clamp(static_cast<int>(std::floor((m.y - grid.origin.y) / grid.h)), 0, grid.ny - 1);
      const Point2 step = ts[k + 1].second - ts[k].second;
      c.mu1[grid.index(i, j)] += step.x;
      c.mu2[grid.index(i, j)] += step.y;
    }
  }
  return c;
}

double pair(const GridCharge& c, const VectorField& field) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.mu1.size(); ++k) {
    if (c.mu1[k] == 0.0 && c.mu2[k] == 0.0) continue;
    const Point2 F = field(c.grid.center(static_cast<int>(k)));
    s += F.x * c.mu1[k] + F.y * c.mu2[k];
  }
  return s;
}

double pair(const SignedGridMeasure& m, const ScalarField& phi) {
  double s = 0.0;
  for (std::size_t k = 0; k < m.mass.size(); ++k)
    if (m.mass[k] != 0.0) s += phi(m.grid.center(static_cast<int>(k))) * m.mass[k];
  return s;
}

double variation(const GridCharge& c) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.mu1.size(); ++k) s += std::hypot(c.mu1[k], c.mu2[k]);
  return s;
}

double staggered_variation(const GridCharge& c) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.mu1.size(); ++k) s += std::abs(c.mu1[k]) + std::abs(c.mu2[k]);
  return s;
}

double annihilation_defect(const GridCharge& c, const ScalarField& phi, const VectorField& grad_phi) {
  return pair(c, grad_phi) + pair(divergence(c), phi);
}

namespace {

Rational to_rational(double v) {
  if (v == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(v, &e);  // v = m 2^e, |m| in [0.5, 1)
  const auto num = static_cast<std::int64_t>(std::ldexp(m, 53));
  int shift = 53 - e;  // v = num / 2^shift
  // Reduce trailing zero bits so the denominator stays small.
  std::int64_t n = num;
  while (shift > 0 && (n & 1) == 0) {
    n >>= 1;
    --shift;
  }
  require(shift <= 40, "exact mode needs dyadic values with denominators up to 2^40");
  if (shift >= 0) return Rational(n, std::int64_t{1} << shift);
  require(-shift < 62 && std::abs(static_cast<double>(n)) < std::ldexp(1.0, 62 + shift),
          "value too large for exact mode");
  return Rational(n * (std::int64_t{1} << -shift));
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

template <class Num>
Num from_double(double v) {
  if constexpr (std::is_same_v<Num, double>) return v;
  else return to_rational(v);
}

template <class Num>
double as_double(const Num& v) {
  if constexpr (std::is_same_v<Num, double>) return v;
  else return to_double(v);
}

template <class Num>
Num abs_num(const Num& v) {
  return v < Num(0) ? -v : v;
}

// Flow network on cell centers. H[k]: flow from cell k to its +x neighbour,
// V[k]: flow to its +y neighbour (negative values flow the other way).
template <class Num>
class FlowDecomposer {
 public:
  FlowDecomposer(const GridCharge& c, ArithmeticMode mode) : g_(c.grid), mode_(mode) {
    const std::size_t n = g_.cells();
    H_.assign(n, Num(0));
    V_.assign(n, Num(0));
    ex_.assign(n, Num(0));
    const Num h = from_double<Num>(g_.h);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      H_[k] = from_double<Num>(c.mu1[k]) / h;
      V_[k] = from_double<Num>(c.mu2[k]) / h;
      scale = std::max({scale, std::abs(c.mu1[k]), std::abs(c.mu2[k])});
    }
    dust_ = mode == ArithmeticMode::Float ? 1e-12 * scale / g_.h : 0.0;
    residual_ = GridCharge::zeros(g_);
    // Flow leaving the grid cannot end at a cell.
    for (int j = 0; j < g_.ny; ++j) drop(g_.index(g_.nx - 1, j), true);
    for (int i = 0; i < g_.nx; ++i) drop(g_.index(i, g_.ny - 1), false);
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        const int k = g_.index(i, j);
        if (i + 1 < g_.nx) {
          ex_[k] += H_[k];
          ex_[g_.index(i + 1, j)] -= H_[k];
        }
        if (j + 1 < g_.ny) {
          ex_[k] += V_[k];
          ex_[g_.index(i, j + 1)] -= V_[k];
        }
      }
  }

  PathDecomposition run() {
    PathDecomposition d;
    d.grid = g_;
    d.mode = mode_;
    // Sources in (i, j) order.
    for (int i = 0; i < g_.nx; ++i)
      for (int j = 0; j < g_.ny; ++j) {
        const int s = g_.index(i, j);
        while (positive(ex_[s])) {
          if (!trace_from(s, d)) break;
        }
      }
    for (int i = 0; i < g_.nx; ++i)
      for (int j = 0; j < g_.ny; ++j) {
        const int s = g_.index(i, j);
        while (next_cell(s) >= 0) close_cycle_from(s, d);
      }
    // Whatever flow is left (float dust, stuck sources) joins the residual.
    for (std::size_t k = 0; k < g_.cells(); ++k) {
      residual_.mu1[k] += as_double(H_[k]) * g_.h;
      residual_.mu2[k] += as_double(V_[k]) * g_.h;
    }
    d.residual = residual_;
    return d;
  }

 private:
  bool positive(const Num& v) const {
    if constexpr (std::is_same_v<Num, double>) return v > dust_;
    else return v > Num(0);
  }

  void drop(int k, bool horizontal) {
    auto& f = horizontal ? H_[k] : V_[k];
    (horizontal ? residual_.mu1[k] : residual_.mu2[k]) += as_double(f) * g_.h;
    f = Num(0);
  }

  // Flow on the edge between cells a and b in direction a -> b.
  Num edge_flow(int a, int b) const {
    const int ai = a % g_.nx, bi = b % g_.nx;
    if (bi == ai + 1) return H_[a];
    if (bi == ai - 1) return -H_[b];
    if (b > a) return V_[a];
    return -V_[b];
  }

  void push(int a, int b, const Num& w) {
    const int ai = a % g_.nx, bi = b % g_.nx;
    if (bi == ai + 1) H_[a] -= w;
    else if (bi == ai - 1) H_[b] += w;
    else if (b > a) V_[a] -= w;
    else V_[b] += w;
    ex_[a] -= w;
    ex_[b] += w;
    clean(a, b);
  }

  void clean(int a, int b) {
    if constexpr (std::is_same_v<Num, double>) {
      const Num f = edge_flow(a, b);
      if (f != 0.0 && std::abs(f) <= dust_) {
        // Move dust into the residual, keeping the excess bookkeeping exact.
        const int ai = a % g_.nx, bi = b % g_.nx;
        const int lo = std::min(a, b);
        const bool horizontal = ai != bi;
        ex_[a] -= f;
        ex_[b] += f;
        drop(lo, horizontal);
      }
    }
  }

  // Lexicographically smallest (i, j) neighbour with positive outgoing flow.
  int next_cell(int a) const {
    const int i = a % g_.nx, j = a / g_.nx;
    const int cand[4][2] = {{i - 1, j}, {i, j - 1}, {i, j + 1}, {i + 1, j}};
    for (const auto& c : cand) {
      if (c[0] < 0 || c[1] < 0 || c[0] >= g_.nx || c[1] >= g_.ny) continue;
      const int b = g_.index(c[0], c[1]);
      if (positive(edge_flow(a, b))) return b;
    }
    return -1;
  }

  DecomposedPath make_entry(const std::vector<int>& cells, const Num& w) const {
    DecomposedPath e;
    e.weight = as_double(w);
    e.cells = cells;
    std::vector<Point2> pts;
    for (int k : cells) pts.push_back(g_.center(k));
    e.path = Polyline(std::move(pts));
    return e;
  }

  void extract_cycle(std::vector<int>& walk, std::vector<int>& pos, int start, PathDecomposition& d) {
    std::vector<int> cyc(walk.begin() + pos[start], walk.end());
    cyc.push_back(start);
    Num w = edge_flow(cyc[0], cyc[1]);
    for (std::size_t k = 1; k + 1 < cyc.size(); ++k) w = std::min(w, edge_flow(cyc[k], cyc[k + 1]));
    for (std::size_t k = 0; k + 1 < cyc.size(); ++k) {
      push(cyc[k], cyc[k + 1], w);
      ex_[cyc[k]] += w;  // cycles do not change excess
      ex_[cyc[k + 1]] -= w;
    }
    d.cycles.push_back(make_entry(cyc, w));
    for (std::size_t k = pos[start] + 1; k < walk.size(); ++k) pos[walk[k]] = -1;
    walk.resize(pos[start] + 1);
  }

  bool trace_from(int s, PathDecomposition& d) {
    std::vector<int> walk{s};
    std::vector<int>& pos = pos_;
    pos.assign(g_.cells(), -1);
    pos[s] = 0;
    for (;;) {
      const int a = walk.back();
      if (a != s && ex_[a] < Num(0) && positive(-ex_[a])) break;
      const int b = next_cell(a);
      if (b < 0) {
        // Stuck: only float dust can cause this; hand the excess to the residual.
        for (int k : walk) pos[k] = -1;
        return false;
      }
      if (pos[b] >= 0) {
        extract_cycle(walk, pos, b, d);
        continue;
      }
      pos[b] = static_cast<int>(walk.size());
      walk.push_back(b);
    }
    const int t = walk.back();
    Num w = std::min(ex_[s], -ex_[t]);
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) w = std::min(w, edge_flow(walk[k], walk[k + 1]));
    for (std::size_t k = 0; k + 1 < walk.size(); ++k) push(walk[k], walk[k + 1], w);
    d.entries.push_back(make_entry(walk, w));
    return true;
  }

  void close_cycle_from(int s, PathDecomposition& d) {
    std::vector<int> walk{s};
    std::vector<int>& pos = pos_;
    pos.assign(g_.cells(), -1);
    pos[s] = 0;
    for (;;) {
      const int b = next_cell(walk.back());
      if (b < 0) return;  // float dust only
      if (pos[b] >= 0) {
        extract_cycle(walk, pos, b, d);
        return;
      }
      pos[b] = static_cast<int>(walk.size());
      walk.push_back(b);
    }
  }

  ChargeGrid g_;
  ArithmeticMode mode_;
  std::vector<Num> H_, V_, ex_;
  std::vector<int> pos_;
  double dust_ = 0.0;
  GridCharge residual_;
};

double path_variation(const std::vector<DecomposedPath>& v) {
  double s = 0.0;
  for (const auto& e : v) s += e.weight * e.path.length();
  return s;
}

}  // namespace

PathDecomposition decompose(const GridCharge& charge, ArithmeticMode mode) {
  charge.validate();
  PathDecomposition d = mode == ArithmeticMode::Exact ? FlowDecomposer<Rational>(charge, mode).run()
                                                      : FlowDecomposer<double>(charge, mode).run();
  const double traced = path_variation(d.entries) + path_variation(d.cycles) + staggered_variation(d.residual);
  d.variation_defect = traced - staggered_variation(charge);
  d.l2_excess = traced - variation(charge);
  return d;
}

GridCharge reassemble(const PathDecomposition& d) {
  GridCharge c = d.residual;
  auto add = [&](const DecomposedPath& e) {
    for (std::size_t k = 0; k + 1 < e.cells.size(); ++k) {
      const int a = e.cells[k], b = e.cells[k + 1];
      const int ai = a % d.grid.nx, bi = b % d.grid.nx;
      const double m = e.weight * d.grid.h;
      if (bi == ai + 1) c.mu1[a] += m;
      else if (bi == ai - 1) c.mu1[b] -= m;
      else if (b > a) c.mu2[a] += m;
      else c.mu2[b] -= m;
    }
  };
  for (const auto& e : d.entries) add(e);
  for (const auto& e : d.cycles) add(e);
  return c;
}

namespace {

template <class Num>
double identity_defect(const PathDecomposition& d, const GridCharge& charge) {
  const auto& g = charge.grid;
  const Num h = from_double<Num>(g.h);
  std::vector<Num> r(g.cells(), Num(0));
  auto add_div = [&](const GridCharge& c, int sign) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const int k = g.index(i, j);
        Num v = from_double<Num>(c.mu1[k]) + from_double<Num>(c.mu2[k]);
        if (i > 0) v -= from_double<Num>(c.mu1[g.index(i - 1, j)]);
        if (j > 0) v -= from_double<Num>(c.mu2[g.index(i, j - 1)]);
        r[k] += Num(sign) * v / h;
      }
  };
  add_div(charge, 1);
  add_div(d.residual, -1);
  for (const auto& e : d.entries) {
    const Num w = from_double<Num>(e.weight);
    r[e.cells.front()] -= w;
    r[e.cells.back()] += w;
  }
  Num total(0);
  for (const auto& v : r) total += abs_num(v);
  return as_double(total);
}

}  // namespace

double divergence_identity_check(const PathDecomposition& d, const GridCharge& charge) {
  require(d.grid == charge.grid && d.residual.grid == charge.grid, "decomposition and charge grids differ");
  charge.validate();
  if (d.mode == ArithmeticMode::Exact) return identity_defect<Rational>(d, charge);
  return identity_defect<double>(d, charge);
}

}  // namespace c1k
