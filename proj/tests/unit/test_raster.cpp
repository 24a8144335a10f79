#include <doctest.h>

#include <cmath>

#include "c1k/raster.hpp"

using namespace c1k;
using doctest::Approx;

namespace {

RegionSpec spec(std::string id, std::map<std::string, double> params = {}) {
  RegionSpec s;
  s.id = std::move(id);
  s.params = std::move(params);
  return s;
}

RasterSet2D blocks() {
  // Two 2x2 blocks separated by an empty column.
  std::vector<std::uint8_t> occ(5 * 2, 0);
  for (int j = 0; j < 2; ++j)
    for (int i : {0, 1, 3, 4}) occ[j * 5 + i] = 1;
  return RasterSet2D({0, 0}, 1.0, 5, 2, occ);
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("unit square at h = 1/8") {
  const auto r = rasterize(spec("square"), 0.125);
  CHECK(r.nx() == 8);
  CHECK(r.ny() == 8);
  CHECK(r.occupied_count() == 64);
  int interior = 0, boundary = 0;
  for (int idx = 0; idx < static_cast<int>(r.size()); ++idx) {
    interior += r.interior(idx);
    boundary += r.boundary(idx);
  }
  CHECK(interior == 36);
  CHECK(boundary == 28);
  CHECK(make_region(*r.source())->certificate() == "convex");
}

TEST_CASE("cell lookup and centers agree") {
  const auto r = rasterize(spec("square"), 0.125);
  for (int idx = 0; idx < static_cast<int>(r.size()); ++idx) CHECK(r.cell_of(r.center(idx)) == idx);
  CHECK(r.cell_of({-0.5, 0.5}) == -1);
  CHECK(r.contains({0.5, 0.5}));
  CHECK(r.nearest_occupied({5.0, 5.0}) == r.index(7, 7));
}

TEST_CASE("disk area and anchored center") {
  const double h = 1.0 / 32;
  const auto r = rasterize(spec("disk"), h);
  CHECK(r.occupied_count() * h * h == Approx(kPi).epsilon(0.02));
  const int c = r.cell_of({0, 0});
  REQUIRE(c >= 0);
  CHECK(r.center(c).x == Approx(0.0).epsilon(1e-12));
  CHECK(r.center(c).y == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("components") {
  CHECK(components(blocks()).count == 2);
  CHECK(components(rasterize(spec("annulus"), 1.0 / 16)).count == 1);
  const auto c = components(blocks());
  CHECK(c.label[2] == -1);
  CHECK(c.label[0] != c.label[4]);
}

TEST_CASE("refinement halves the cell size and needs a source") {
  const auto r = rasterize(spec("disk"), 0.25);
  const auto f = refine(r, 2);
  CHECK(f.h() == Approx(0.125));
  CHECK(f.occupied_count() > r.occupied_count());
  CHECK_THROWS_AS(refine(blocks(), 2), ContractError);
}

TEST_CASE("dilation pads the grid and thickens the set") {
  const auto b = blocks();
  const auto d = dilate(b, 1.0);
  CHECK(d.nx() == b.nx() + 2);
  CHECK(d.ny() == b.ny() + 2);
  CHECK(components(d).count == 1);  // the gap column is one cell wide
  CHECK(dilate(b, 0.0).occupied_count() == b.occupied_count());
  CHECK_THROWS_AS(dilate(b, -1.0), ContractError);
}

TEST_CASE("cell budget is enforced") {
  CHECK_THROWS_AS(rasterize(spec("square"), 1e-3, 1000), ContractError);
}

TEST_CASE("region parameter validation") {
  CHECK_THROWS_AS(make_region(spec("disk", {{"r", -1}})), ContractError);
  CHECK_THROWS_AS(make_region(spec("annulus", {{"r_in", 2}, {"r_out", 1}})), ContractError);
  CHECK_THROWS_AS(make_region(spec("sauter", {{"c", 0.3}})), ContractError);
  CHECK_THROWS_AS(make_region(spec("halfplane_clip")), ContractError);
  CHECK_THROWS_AS(make_region(spec("teapot")), ContractError);
}

TEST_CASE("sauter balls are disjoint with diameter sum below 1/4") {
  const auto balls = sauter_balls(5, 0.125);
  double total = 0.0;
  for (const auto& b : balls) total += 2.0 * b.r;
  CHECK(total < 0.25);
  bool disjoint = true;
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (distance(balls[i].c, balls[j].c) <= balls[i].r + balls[j].r) disjoint = false;
  CHECK(disjoint);
  // Every ball sits strictly inside a removed middle third.
  for (const auto& b : balls) {
    const auto region = make_region(spec("sauter"));
    CHECK_FALSE(region->contains(b.c));
  }
}

TEST_CASE("sauter raster carries the fence as skeleton") {
  const auto r = rasterize(spec("sauter", {{"generations", 3}}), 1.0 / 27);
  REQUIRE_FALSE(r.skeleton().empty());
  CHECK(r.on_skeleton(r.cell_of({0.01, 0.5})));
  CHECK_FALSE(r.on_skeleton(r.cell_of({0.5, 0.5})));
}

TEST_CASE("wall holes and their resolution cutoff") {
  const auto region = make_region(spec("disk_with_holes"));
  CHECK_FALSE(region->contains({0.25, 0.0}));  // center of a first-generation hole
  CHECK(region->occupies({0.25, 0.0}, 1.0));   // hole radius 1/32 < h/2
  CHECK(region->contains({0.0, 0.0}));
  CHECK_FALSE(region->contains({0.9, 0.9}));
  for (const auto& b : wall_balls(6)) CHECK(b.r < std::abs(b.c.x));
}

TEST_CASE("product set rasterizes as thin columns") {
  const auto r = rasterize(spec("product", {{"depth", 4}}), 1.0 / 64);
  CHECK(r.contains({0.0, 0.5}));
  CHECK(r.contains({0.5, 0.5}));
  CHECK(r.contains({0.0625, 0.25}));
  CHECK_FALSE(r.contains({0.75, 0.5}));
  CHECK(components(r).count == 6);
}

TEST_CASE("half-plane clip keeps one side") {
  RegionSpec s = spec("halfplane_clip", {{"nx", 1}, {"ny", 0}, {"c", 0.5}});
  s.base = std::make_shared<RegionSpec>(spec("square"));
  const auto r = rasterize(s, 0.125);
  CHECK(r.occupied_count() == 32);
  CHECK(make_region(s)->certificate() == "convex");
}

TEST_CASE("smoothstep profile") {
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == Approx(0.5));
  CHECK(smoothstep(-3.0) == 0.0);
  CHECK(smoothstep(3.0) == 1.0);
  for (double s = 0.05; s < 1.0; s += 0.1) {
    const double fd = (smoothstep(s + 1e-6) - smoothstep(s - 1e-6)) / 2e-6;
    CHECK(smoothstep_deriv(s) == Approx(fd).epsilon(1e-6));
  }
  CHECK(smoothstep_deriv(0.5) == Approx(1.875));
}

}  // TEST_SUITE
