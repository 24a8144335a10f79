#include <doctest.h>

#include <cmath>
#include <random>

#include "c1k/metric.hpp"

using namespace c1k;
using doctest::Approx;

namespace {

RegionSpec spec(std::string id, std::map<std::string, double> params = {}) {
  RegionSpec s;
  s.id = std::move(id);
  s.params = std::move(params);
  return s;
}

RasterSet2D random_raster(std::mt19937_64& rng, int nx, int ny, double fill) {
  std::bernoulli_distribution b(fill);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(nx) * ny);
  for (auto& v : occ) v = b(rng);
  occ[0] = 1;
  return RasterSet2D({0, 0}, 0.5, nx, ny, occ);
}

// Label-correcting relaxation over explicit neighbor lists; knight moves need
// both cells that the segment passes through.
std::vector<double> relaxation_oracle(const RasterSet2D& r, int src, int order) {
  std::vector<double> d(r.size(), kInf);
  d[src] = 0;
  struct M { int dx, dy; };
  std::vector<M> ms;
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -2; dx <= 2; ++dx) {
      const int a = std::abs(dx), b = std::abs(dy);
      if ((a <= 1 && b <= 1 && (a || b)) || (order == 16 && a + b == 3)) ms.push_back({dx, dy});
    }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < static_cast<int>(r.size()); ++u) {
      if (!r.occupied(u) || !std::isfinite(d[u])) continue;
      const int ui = r.col(u), uj = r.row(u);
      for (auto m : ms) {
        if (!r.occupied(ui + m.dx, uj + m.dy)) continue;
        if (std::abs(m.dx) + std::abs(m.dy) == 3) {
          // The straight segment crosses the two cells adjacent along the long axis.
          const bool tall = std::abs(m.dy) == 2;
          const int c1i = tall ? ui : ui + m.dx / 2, c1j = tall ? uj + m.dy / 2 : uj;
          const int c2i = tall ? ui + m.dx : ui + m.dx / 2, c2j = tall ? uj + m.dy / 2 : uj + m.dy;
          if (!r.occupied(c1i, c1j) || !r.occupied(c2i, c2j)) continue;
        }
        const int v = r.index(ui + m.dx, uj + m.dy);
        const double nd = d[u] + r.h() * std::hypot(m.dx, m.dy);
        if (nd < d[v] - 1e-15) {
          d[v] = nd;
          changed = true;
        }
      }
    }
  }
  return d;
}

}  // namespace

TEST_SUITE("metric") {

TEST_CASE("order 8 distances on a full grid follow the octile formula") {
  const auto r = rasterize(spec("square"), 1.0 / 16);
  const auto f = geodesic_distances(r, {0.01, 0.01}, 0.0, 8);
  for (int idx = 0; idx < static_cast<int>(r.size()); ++idx) {
    const int a = r.col(idx), b = r.row(idx);
    const double want = (std::max(a, b) - std::min(a, b) + std::sqrt(2.0) * std::min(a, b)) / 16.0;
    CHECK(f.dist[idx] == Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("dijkstra agrees with a relaxation oracle on random rasters") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const auto r = random_raster(rng, 14, 11, 0.7);
    for (int order : {8, 16}) {
      DijkstraOptions opt;
      opt.order = order;
      std::vector<double> d;
      dijkstra(r, 0, opt, d);
      const auto want = relaxation_oracle(r, 0, order);
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::isinf(want[i])) {
          CHECK(std::isinf(d[i]));
        } else {
          CHECK(d[i] == Approx(want[i]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("convex square distortion stays below 1.03 with order 16") {
  const auto r = rasterize(spec("square"), 1.0 / 24);
  const auto u = whitney_constant_uniform(r, 16);
  CHECK_FALSE(u.sampled);
  CHECK(u.value <= kDistortion16 + 1e-12);
  CHECK(u.value <= 1.03);
  CHECK(whitney_constant_uniform(r, 8).value <= kDistortion8 + 1e-12);
}

TEST_CASE("geodesic paths realize the distance") {
  const auto r = rasterize(spec("annulus"), 1.0 / 16);
  const auto f = geodesic_distances(r, {0.75, 0.0});
  const int t = r.cell_of({-0.75, 0.0});
  const auto p = geodesic_path(f, t);
  CHECK(p.length() == Approx(f.dist[t]).epsilon(1e-9));
  for (const auto& v : p.vertices()) CHECK(r.contains(v));
  // Around the hole: at least the half circle of radius 1/2 is impossible to shortcut.
  CHECK(f.dist[t] > kPi * 0.5);
  CHECK_THROWS_AS(geodesic_distances(r, {0.0, 0.0}), ContractError);
}

TEST_CASE("dilation joins nearby components") {
  std::vector<std::uint8_t> occ(5, 0);
  occ[0] = occ[4] = 1;
  const RasterSet2D r({0, 0}, 1.0, 5, 1, occ);
  const auto plain = geodesic_distances(r, {0.5, 0.5});
  CHECK(std::isinf(plain.dist[4]));
  const auto thick = geodesic_distances(r, {0.5, 0.5}, 2.0);
  const int t = thick.graph.cell_of({4.5, 0.5});
  CHECK(thick.dist[t] == Approx(4.0));
}

TEST_CASE("metric symmetry and triangle inequality") {
  const auto r = rasterize(spec("disk_with_holes", {{"generations", 3}}), 1.0 / 16);
  const auto cells = r.occupied_cells();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::vector<int> src;
  for (int i = 0; i < 12; ++i) src.push_back(cells[pick(rng)]);
  std::vector<std::vector<double>> d(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    DijkstraOptions opt;
    dijkstra(r, src[i], opt, d[i]);
  }
  for (std::size_t i = 0; i < src.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j) {
      CHECK(d[i][src[j]] == Approx(d[j][src[i]]).epsilon(1e-12));
      for (std::size_t k = 0; k < src.size(); ++k)
        CHECK(d[i][src[k]] <= d[i][src[j]] + d[j][src[k]] + 1e-9);
    }
}

TEST_CASE("pointwise constant: bounded on convex sets, large behind a slit") {
  const auto sq = rasterize(spec("square"), 1.0 / 32);
  const auto c = whitney_constant_pointwise(sq, {0.5, 0.5}, {0.5, 0.25, 0.1});
  for (double v : c) CHECK(v <= 1.03);
  // Square with a slit {x = 1/2, y < 3/4}: points on either side near the bottom.
  std::vector<std::uint8_t> occ = sq.occupancy();
  for (int j = 0; j < 24; ++j) occ[sq.index(16, j)] = 0;
  const RasterSet2D slit(sq.origin(), sq.h(), sq.nx(), sq.ny(), occ);
  const auto s = whitney_constant_pointwise(slit, {0.47, 0.05}, {0.1});
  CHECK(s[0] > 5.0);
  CHECK_THROWS_AS(whitney_constant_pointwise(slit, {0.5, 0.05}, {0.1}), ContractError);
}

TEST_CASE("uniform constant needs connected sets unless per component") {
  std::vector<std::uint8_t> occ(5, 0);
  occ[0] = occ[1] = occ[3] = occ[4] = 1;
  const RasterSet2D r({0, 0}, 1.0, 5, 1, occ);
  CHECK_THROWS_AS(whitney_constant_uniform(r), ContractError);
  CHECK(whitney_constant_uniform(r, 16, true).value == Approx(1.0));
}

TEST_CASE("interior constant crosses no fence") {
  const auto sq = rasterize(spec("square"), 1.0 / 32);
  CHECK(interior_whitney_constant(sq, {0.5, 0.5}, 0.25) <= 1.03);
  const auto sauter = rasterize(spec("sauter", {{"generations", 3}}), 1.0 / 27);
  CHECK(std::isinf(interior_whitney_constant(sauter, {0.2, 0.5}, 0.3)));
}

TEST_CASE("local constant near a boundary") {
  const auto sq = rasterize(spec("square"), 1.0 / 32);
  const auto u = local_whitney_constant(sq, {0.0, 0.5}, 0.2, 0.2);
  CHECK(u.value <= 1.03);
  CHECK(u.sources > 0);
  CHECK_THROWS_AS(local_whitney_constant(sq, {0.5, 0.5}, 0.05, 0.2), ContractError);
}

TEST_CASE("series grading") {
  CHECK(grade_series({1, 2, 4}).diverging);
  CHECK_FALSE(grade_series({1, 2, 4}).bounded);
  CHECK(grade_series({1, 1.05, 1.06}).bounded);
  CHECK_FALSE(grade_series({1, 1.05, 1.06}).diverging);
  CHECK(grade_series({kInf, kInf}).diverging);
  CHECK_FALSE(grade_series({kInf, kInf}).bounded);
  CHECK(grade_series({2.0, 2.6, 3.3}).diverging);
  CHECK(grade_series({2.0, 2.6, 3.3}).min_growth == Approx(3.3 / 2.6));
  CHECK_FALSE(grade_series({2.0, 2.6, 3.3}, 2.0).diverging);
  CHECK_FALSE(grade_series({1.0}).diverging);
}

TEST_CASE("completeness verdicts from certificates") {
  CHECK(completeness_verdict(rasterize(spec("square"), 0.125)).kind == VerdictKind::Complete);
  CHECK(completeness_verdict(rasterize(spec("annulus"), 0.125)).kind == VerdictKind::Complete);
  CHECK(completeness_verdict(rasterize(spec("product", {{"depth", 4}}), 1.0 / 32)).kind ==
        VerdictKind::Incomplete);
  CHECK(completeness_verdict(CompactSet1D({{0, 1}}, {})).kind == VerdictKind::Complete);
  CHECK(completeness_verdict(CompactSet1D({}, {GapRule::geometric(2.0)})).kind ==
        VerdictKind::Incomplete);
  std::vector<std::uint8_t> occ(4, 1);
  CHECK(completeness_verdict(RasterSet2D({0, 0}, 1.0, 2, 2, occ)).kind == VerdictKind::EvidenceOnly);
  CHECK(to_string(VerdictKind::EvidenceOnly) == "EvidenceOnly");
}

}  // TEST_SUITE
