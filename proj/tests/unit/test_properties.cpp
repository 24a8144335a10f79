#include <doctest.h>

#include <cmath>
#include <random>

#include "c1k/io.hpp"

using namespace c1k;
using doctest::Approx;

// Randomized properties; every suite seeds its own generator so failures replay.

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Polyline random_polyline(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<Point2> v;
  for (int i = 0; i < n; ++i) v.push_back({uniform(rng, lo, hi), uniform(rng, lo, hi)});
  return Polyline(v);
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("sigma of a geometric set is invariant under translation and scale") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    const double a = uniform(rng, 1.5, 6.0);
    const double c = uniform(rng, -5.0, 5.0);
    const double s = std::exp2(uniform(rng, -3.0, 3.0));
    const Side side = t % 2 ? Side::Left : Side::Right;
    const CompactSet1D k({}, {GapRule::geometric(a, c, side, s)});
    const auto r = sigma(k, c);
    CAPTURE(a);
    CAPTURE(c);
    REQUIRE(r.verdict.kind == SigmaKind::Finite);
    CHECK(r.verdict.upper == Approx(a / (a - 1)).epsilon(1e-6));
  }
}

TEST_CASE("power sets stay infinite under translation") {
  std::mt19937_64 rng(102);
  for (int t = 0; t < 10; ++t) {
    const double p = uniform(rng, 0.3, 3.0);
    const double c = uniform(rng, -2.0, 2.0);
    CHECK(sigma(CompactSet1D({}, {GapRule::power(p, c)}), c).verdict.kind == SigmaKind::Infinite);
  }
}

TEST_CASE("set documents round trip") {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 30; ++t) {
    std::vector<GapRule> rules;
    const double c = uniform(rng, -3, 3);
    switch (t % 3) {
      case 0: rules.push_back(GapRule::geometric(uniform(rng, 1.2, 5), c)); break;
      case 1: rules.push_back(GapRule::power(uniform(rng, 0.5, 3), c, Side::Both)); break;
      default: rules.push_back(GapRule::cantor(1 + t % 9, c, c + uniform(rng, 0.1, 3))); break;
    }
    const CompactSet1D k({{c + 5, c + 6}}, rules, 10);
    const auto back = set1d_from_json(parse_document(to_json(k).dump()));
    CHECK(back.materialized() == k.materialized());
    CHECK(dump(to_json(back)) == dump(to_json(k)));
  }
}

TEST_CASE("differentiability residual ignores affine terms") {
  std::mt19937_64 rng(104);
  std::vector<Point2> sites;
  for (int i = 0; i < 200; ++i) sites.push_back({uniform(rng, -1, 1), uniform(rng, -1, 1)});
  const auto base = sample_jet(sites, [](Point2 p) { return std::cos(2 * p.x) * p.y; },
                               [](Point2 p) { return Point2{-2 * std::sin(2 * p.x) * p.y, std::cos(2 * p.x)}; });
  for (int t = 0; t < 10; ++t) {
    const double c0 = uniform(rng, -5, 5), c1 = uniform(rng, -5, 5), c2 = uniform(rng, -5, 5);
    SampledJet shifted = base;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      shifted.f[i] += c0 + c1 * sites[i].x + c2 * sites[i].y;
      shifted.df[i] = shifted.df[i] + Point2{c1, c2};
    }
    for (double delta : {0.1, 0.5}) CHECK(uniform_residual(shifted, delta) == Approx(uniform_residual(base, delta)).epsilon(1e-9));
  }
}

TEST_CASE("path integrals are linear and antisymmetric") {
  std::mt19937_64 rng(105);
  const VectorField f = [](Point2 p) { return Point2{std::sin(p.y), p.x * p.x}; };
  const VectorField g = [](Point2 p) { return Point2{p.x * p.y, std::exp(-p.x)}; };
  for (int t = 0; t < 15; ++t) {
    const auto path = random_polyline(rng, 2 + t % 5, -1, 1);
    const double a = uniform(rng, -3, 3);
    const VectorField h = [&](Point2 p) { return f(p) + a * g(p); };
    const double fi = path_integral(f, path, 12).value;
    const double gi = path_integral(g, path, 12).value;
    CHECK(path_integral(h, path, 12).value == Approx(fi + a * gi).epsilon(1e-9));
    CHECK(path_integral(f, reversed(path), 12).value == Approx(-fi).epsilon(1e-9));
  }
}

TEST_CASE("path charges pair with constant fields as displacement") {
  std::mt19937_64 rng(106);
  ChargeGrid g;
  g.nx = g.ny = 16;
  g.h = 1.0 / 16;
  for (int t = 0; t < 20; ++t) {
    const auto path = random_polyline(rng, 2 + t % 6, 0.0, 1.0);
    const auto c = charge_of_path(path, g);
    const Point2 disp = path.back() - path.front();
    const double a = uniform(rng, -2, 2), b = uniform(rng, -2, 2);
    CHECK(pair(c, [=](Point2) { return Point2{a, b}; }) == Approx(a * disp.x + b * disp.y).epsilon(1e-9));
    CHECK(variation(c) <= path.length() * (1 + 1e-12));
  }
}

TEST_CASE("decomposition identity on random path charges") {
  std::mt19937_64 rng(107);
  ChargeGrid g;
  g.nx = g.ny = 12;
  g.h = 1.0 / 12;
  for (int t = 0; t < 10; ++t) {
    GridCharge c = GridCharge::zeros(g);
    for (int k = 0; k < 3; ++k) c += charge_of_path(random_polyline(rng, 4, 0.0, 1.0), g).scaled(uniform(rng, 0.2, 2));
    const auto d = decompose(c);
    CHECK(divergence_identity_check(d, c) < 1e-9);
    const auto back = reassemble(d);
    double diff = 0.0;
    for (std::size_t k = 0; k < c.mu1.size(); ++k) diff += std::abs(back.mu1[k] - c.mu1[k]) + std::abs(back.mu2[k] - c.mu2[k]);
    CHECK(diff < 1e-9);
  }
}

TEST_CASE("geodesic distance dominates the euclidean distance") {
  std::mt19937_64 rng(108);
  RegionSpec s;
  s.id = "annulus";
  const auto r = rasterize(s, 1.0 / 20);
  const auto cells = r.occupied_cells();
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (int t = 0; t < 6; ++t) {
    const int src = cells[pick(rng)];
    DijkstraOptions opt;
    std::vector<double> d;
    dijkstra(r, src, opt, d);
    for (int k = 0; k < 50; ++k) {
      const int dst = cells[pick(rng)];
      CHECK(d[dst] >= distance(r.center(src), r.center(dst)) * (1 - 1e-12));
    }
  }
}

TEST_CASE("convex rasters have distortion below the stencil bound") {
  std::mt19937_64 rng(109);
  RegionSpec s;
  s.id = "disk";
  const auto r = rasterize(s, 1.0 / 24);
  const auto cells = r.occupied_cells();
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (int t = 0; t < 6; ++t) {
    const int src = cells[pick(rng)];
    DijkstraOptions opt;
    std::vector<double> d;
    dijkstra(r, src, opt, d);
    for (int k = 0; k < 50; ++k) {
      const int dst = cells[pick(rng)];
      if (dst == src) continue;
      CHECK(d[dst] <= kDistortion16 * distance(r.center(src), r.center(dst)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("partition of unity on random site clouds") {
  std::mt19937_64 rng(110);
  for (int t = 0; t < 4; ++t) {
    std::vector<Point2> sites;
    for (int i = 0; i < 300; ++i) sites.push_back({uniform(rng, 0, 1), uniform(rng, 0, 1)});
    const auto jet = sample_jet(sites, [](Point2 p) { return p.x - p.y; }, [](Point2) { return Point2{1, -1}; });
    const auto ext = extend_partition_unity(jet, {0, 0}, 0.125);
    for (int k = 0; k < 100; ++k) {
      const Point2 p{uniform(rng, 0.05, 0.95), uniform(rng, 0.05, 0.95)};
      CHECK(ext->weight_sum(p) == Approx(1.0).epsilon(1e-12));
      CHECK(ext->value(p) == Approx(p.x - p.y).epsilon(1e-10));
    }
  }
}

}  // TEST_SUITE
