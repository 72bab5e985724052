#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "affinefocus/atlas.hpp"
#include "affinefocus/errors.hpp"
#include "affinefocus/examples.hpp"

using namespace af;

static std::vector<long> focus_indices(const ValidationReport& rep) {
  std::vector<long> ks;
  for (const auto& vc : rep.classes)
    if (vc.kind == VertexKind::Focus) ks.push_back(vc.index);
  std::sort(ks.begin(), ks.end());
  return ks;
}

static size_t count_kind(const ValidationReport& rep, VertexKind k) {
  size_t n = 0;
  for (const auto& vc : rep.classes) n += vc.kind == k;
  return n;
}

static long euler_characteristic(const Atlas& a, const ValidationReport& rep) {
  size_t boundary_edges = 0;
  for (const auto& loop : boundary_loops(a)) boundary_edges += loop.size();
  return long(rep.classes.size()) - long(a.gluings.size() + boundary_edges) +
         long(a.charts.size());
}

static bool atlas_eq(const Atlas& a, const Atlas& b) {
  if (a.charts.size() != b.charts.size() || a.gluings.size() != b.gluings.size() ||
      a.focus.size() != b.focus.size())
    return false;
  for (size_t i = 0; i < a.charts.size(); ++i)
    if (a.charts[i].id != b.charts[i].id || a.charts[i].v != b.charts[i].v) return false;
  for (size_t i = 0; i < a.gluings.size(); ++i) {
    const Gluing &x = a.gluings[i], &y = b.gluings[i];
    if (x.src != y.src || x.dst != y.dst || !(x.map == y.map)) return false;
  }
  for (size_t i = 0; i < a.focus.size(); ++i)
    if (a.focus[i].at != b.focus[i].at || a.focus[i].index != b.focus[i].index) return false;
  return true;
}

TEST_CASE("focus box atlas validates with one focus class") {
  for (long k : {1, 2, 3}) {
    Atlas a = focus_box_atlas(k, Q(1), Q(2));
    ValidationReport rep = validate(a);
    CHECK(rep.pass);
    CHECK(focus_indices(rep) == std::vector<long>{k});
    CHECK(rep.total_focus_index == k);
    // holonomy at the focus, based at the wall germ of the left chart
    Topology t = build_topology(a);
    AffineT hol = vertex_holonomy(a, t.class_of.at({0, 2}));
    CHECK(hol.lin == LinZ{1, 0, -Z(k), 1});
    CHECK(hol.apply({Q(0), Q(0)}) == Vec2{Q(0), Q(0)});
  }
}

TEST_CASE("focus box atlas triangle case") {
  Atlas a = focus_box_atlas(1, Q(2), Q(1, 2));  // 2*delta' <= k*delta
  CHECK(a.charts[1].size() == 4);
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(rep.total_focus_index == 1);
  // boundary of the box is one rim: three left edges, two triangle edges
  auto loops = boundary_loops(a);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].size() == 5);
}

TEST_CASE("focus box atlas rejects bad parameters") {
  CHECK_THROWS_AS(focus_box_atlas(0, Q(1), Q(1)), InvalidParams);
  CHECK_THROWS_AS(focus_box_atlas(-1, Q(1), Q(1)), InvalidParams);
  CHECK_THROWS_AS(focus_box_atlas(1, Q(0), Q(1)), InvalidParams);
  CHECK_THROWS_AS(focus_box_atlas(1, Q(1), Q(-1)), InvalidParams);
}

TEST_CASE("flower anchor data") {
  FlowerData d = flower_data();
  CHECK(d.Q[7] - d.O[0] == Vec2{Q(-6), Q(3)});
  CHECK(d.M[0].apply(d.Q[7] - d.O[0]) == d.P[0] - d.O[0]);
  CHECK(d.M[1].apply(d.Q[0] - d.O[1]) == d.P[1] - d.O[1]);
  // the quarter turn repeats after four petals
  CHECK(d.M[4] == d.M[0]);
  CHECK(d.M[5] == d.M[1]);
  CHECK(d.O[4] == -d.O[0]);
}

TEST_CASE("flower validates with alternating focus indices") {
  Atlas a = shuriken_flower();
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(focus_indices(rep) == std::vector<long>{1, 1, 1, 1, 2, 2, 2, 2});
  CHECK(rep.total_focus_index == 12);
  CHECK(count_kind(rep, VertexKind::Boundary) == 8);
  for (const auto& vc : rep.classes)
    if (vc.kind == VertexKind::Boundary) CHECK(vc.corner == CornerKind::Concave);
}

TEST_CASE("flower petals develop to triangles") {
  Atlas a = shuriken_flower();
  for (const Chart& ch : a.charts) {
    size_t bent = 0;
    for (size_t i = 0; i < ch.size(); ++i)
      bent += cross(ch.edge_vec(i + ch.size() - 1), ch.edge_vec(i)) != 0;
    CHECK(bent == 3);
  }
}

TEST_CASE("flower boundary: one loop of eight edges of length two") {
  Atlas a = shuriken_flower();
  auto loops = boundary_loops(a);
  REQUIRE(loops.size() == 1);
  REQUIRE(loops[0].size() == 8);
  for (const BoundaryEdgeInfo& e : loops[0]) {
    CHECK(e.edge.edge == 2);
    CHECK(e.length == 2);
    CHECK(!e.char_inside.has_value());  // corners are concave from inside
    REQUIRE(e.char_outside.has_value());
    CHECK(*e.char_outside == (e.edge.chart % 2 == 0 ? 4 : 2));
  }
}

TEST_CASE("octagon validates with alternating focus indices") {
  Atlas a = complement_octagon();
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(focus_indices(rep) == std::vector<long>{1, 1, 1, 1, 2, 2, 2, 2});
  CHECK(rep.total_focus_index == 12);
  for (const auto& vc : rep.classes)
    if (vc.kind == VertexKind::Boundary) CHECK(vc.corner == CornerKind::Convex);
}

TEST_CASE("octagon boundary invariants match the flower edge for edge") {
  auto floops = boundary_loops(shuriken_flower());
  auto oloops = boundary_loops(complement_octagon());
  REQUIRE(floops.size() == 1);
  REQUIRE(oloops.size() == 1);
  REQUIRE(oloops[0].size() == 8);
  std::map<size_t, std::pair<Q, Q>> flower, octagon;  // petal -> (length, char)
  for (const BoundaryEdgeInfo& e : floops[0]) {
    REQUIRE(e.char_outside.has_value());
    flower[e.edge.chart] = {e.length, *e.char_outside};
  }
  for (const BoundaryEdgeInfo& e : oloops[0]) {
    CHECK(!e.char_outside.has_value());
    REQUIRE(e.char_inside.has_value());
    octagon[e.edge.chart] = {e.length, *e.char_inside};
  }
  for (size_t i = 0; i < 8; ++i) CHECK(flower.at(i) == octagon.at(i));
}

TEST_CASE("black hole sphere is closed with total index 24") {
  Atlas a = black_hole_sphere();
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(rep.connected);
  CHECK(boundary_loops(a).empty());
  CHECK(rep.total_focus_index == 24);
  CHECK(focus_indices(rep) ==
        std::vector<long>{1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2});
  CHECK(count_kind(rep, VertexKind::Flat) == 10);
  CHECK(a.charts.size() == 16);
  CHECK(a.gluings.size() == 40);
  CHECK(rep.classes.size() == 26);
  CHECK(euler_characteristic(a, rep) == 2);
}

TEST_CASE("convex sphere validates with twelve double foci") {
  Atlas a = convex_sphere();
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(rep.connected);
  CHECK(boundary_loops(a).empty());
  CHECK(focus_indices(rep) == std::vector<long>(12, 2));
  CHECK(rep.total_focus_index == 24);
  CHECK(count_kind(rep, VertexKind::Flat) == 6);
  CHECK(euler_characteristic(a, rep) == 2);
}

TEST_CASE("convex sphere strips are straight annuli") {
  for (char axis : {'X', 'Y', 'Z'}) {
    Atlas s = convex_sphere_strip(axis);
    CHECK(s.charts.size() == 8);
    ValidationReport rep = validate(s);
    CHECK(rep.pass);
    CHECK(rep.connected);
    CHECK(focus_indices(rep) == std::vector<long>(4, 2));
    CHECK(count_kind(rep, VertexKind::Flat) == 4);
    CHECK(count_kind(rep, VertexKind::Boundary) == 8);
    for (const auto& vc : rep.classes)
      if (vc.kind == VertexKind::Boundary) CHECK(vc.corner == CornerKind::Straight);
    auto loops = boundary_loops(s);
    REQUIRE(loops.size() == 2);
    CHECK(loops[0].size() == 4);
    CHECK(loops[1].size() == 4);
    CHECK(euler_characteristic(s, rep) == 0);
  }
  CHECK_THROWS_AS(convex_sphere_strip('W'), InvalidArgument);
}

TEST_CASE("builders are deterministic") {
  CHECK(atlas_eq(shuriken_flower(), shuriken_flower()));
  CHECK(atlas_eq(complement_octagon(), complement_octagon()));
  CHECK(atlas_eq(black_hole_sphere(), black_hole_sphere()));
  CHECK(atlas_eq(convex_sphere(), convex_sphere()));
  CHECK(atlas_eq(convex_sphere_strip('Y'), convex_sphere_strip('Y')));
}

TEST_CASE("negative k pair is joinable only once k is positive") {
  auto [m, a, b] = negative_k_box_model();
  CHECK(in_bounds(m, a));
  CHECK(in_bounds(m, b));
  CHECK(segment_exists(m, a, b).count == 0);
  WallModel plus = focus_box_model(Q(1), Q(1), Q(2));
  CHECK(segment_exists(plus, a, b).count >= 1);
}

TEST_CASE("bundled wall model counterexamples re-export") {
  {
    auto [m, a, b] = focus2_box_model();
    CHECK(segment_exists(m, a, b).count == 0);
  }
  {
    auto [m, a, b] = dim3_model();
    CHECK(segment_exists(m, a, b).count == 0);
  }
}

TEST_CASE("example registry builds everything it lists") {
  size_t atlases = 0, models = 0;
  for (const ExampleDescriptor& d : example_registry()) {
    if (d.kind == "atlas") {
      CHECK(validate(build_example_atlas(d.name)).pass);
      ++atlases;
    } else {
      REQUIRE(d.kind == "wall_model");
      auto [m, a, b] = build_example_model(d.name);
      CHECK(in_bounds(m, a));
      CHECK(in_bounds(m, b));
      ++models;
    }
  }
  CHECK(atlases == 8);
  CHECK(models == 3);
  CHECK_THROWS_AS(build_example_atlas("nope"), InvalidArgument);
  CHECK_THROWS_AS(build_example_model("nope"), InvalidArgument);
}
