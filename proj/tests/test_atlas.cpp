#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affinefocus/atlas.hpp"
#include "affinefocus/errors.hpp"

using namespace af;

static Chart mk(std::initializer_list<std::pair<long, long>> pts) {
  Chart c;
  for (auto [x, y] : pts) c.v.push_back({Q(x), Q(y)});
  return c;
}

// Focus box with one wall of index k: left chart in (F,G), right chart in
// (F,G_l), glued along the wall below and above the focus at the origin.
static Atlas focus_box_atlas_k(long k) {
  Atlas a;
  a.charts.push_back(mk({{-1, -2}, {0, -2}, {0, 0}, {0, 2}, {-1, 2}}));
  a.charts.push_back(mk({{0, -2}, {1, -2}, {1, 2 - k}, {0, 2}, {0, 0}}));
  a.gluings.push_back({{0, 1}, {1, 4}, AffineT::identity(), "wall_low"});
  a.gluings.push_back({{0, 2}, {1, 3}, AffineT{LinZ{1, 0, -Z(k), 1}, {}}, "wall_high"});
  a.focus.push_back({{0, 2}, k});
  return a;
}

static Atlas two_square_torus() {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  a.charts.push_back(mk({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  AffineT left{LinZ::identity(), {Q(-1), Q(0)}};
  AffineT right{LinZ::identity(), {Q(1), Q(0)}};
  AffineT up{LinZ::identity(), {Q(0), Q(1)}};
  a.gluings.push_back({{0, 1}, {1, 3}, left, ""});
  a.gluings.push_back({{0, 3}, {1, 1}, right, ""});
  a.gluings.push_back({{0, 0}, {0, 2}, up, ""});
  a.gluings.push_back({{1, 0}, {1, 2}, up, ""});
  return a;
}

TEST_CASE("arc predicates") {
  Vec2 e{Q(1), Q(0)}, n{Q(0), Q(1)}, w{Q(-1), Q(0)}, s{Q(0), Q(-1)};
  CHECK(arc_step_valid(e, n));
  CHECK(arc_step_valid(e, w));   // exactly pi
  CHECK_FALSE(arc_step_valid(e, s));  // right turn
  CHECK_FALSE(arc_step_valid(e, e));

  CHECK(arc_contains(e, n, Vec2{Q(1), Q(1)}));
  CHECK(arc_contains(e, n, n));        // closed at the far end
  CHECK_FALSE(arc_contains(e, n, e));  // open at the near end
  CHECK(arc_contains(e, w, n));        // pi-wide arc
  CHECK(arc_contains(e, w, w));
  CHECK_FALSE(arc_contains(e, w, s));

  CHECK(sector_contains_strict(e, n, Vec2{Q(2), Q(1)}));
  CHECK_FALSE(sector_contains_strict(e, n, e));

  std::vector<Vec2> square = {e, n, w, s, e};
  CHECK(fan_winding(square) == 1);
  CHECK(fan_angle_class({e, n}) == CornerKind::Convex);
  CHECK(fan_angle_class({e, n, w}) == CornerKind::Straight);
  CHECK(fan_angle_class({e, n, w, s}) == CornerKind::Concave);
}

TEST_CASE("focus box atlas validates with one focus class") {
  Atlas a = focus_box_atlas_k(1);
  ValidationReport rep = validate(a);
  REQUIRE(rep.structural.empty());
  CHECK(rep.pass);
  CHECK(rep.connected);
  CHECK(rep.total_focus_index == 1);

  int focus = 0, boundary = 0, straight = 0, convex = 0;
  for (const auto& vc : rep.classes) {
    if (vc.kind == VertexKind::Focus) {
      ++focus;
      CHECK(vc.index == 1);
      CHECK(vc.germs.size() == 2);
      REQUIRE(vc.holonomy.has_value());
      CHECK(vc.holonomy->lin == LinZ{1, 0, -1, 1});
      CHECK(vc.holonomy->apply({Q(0), Q(0)}) == Vec2{Q(0), Q(0)});
    } else {
      REQUIRE(vc.kind == VertexKind::Boundary);
      ++boundary;
      REQUIRE(vc.corner.has_value());
      if (*vc.corner == CornerKind::Straight) ++straight;
      if (*vc.corner == CornerKind::Convex) ++convex;
    }
  }
  CHECK(focus == 1);
  CHECK(boundary == 6);
  // both wall endpoints develop to exactly pi: the box edges stay straight
  // across the wall
  CHECK(straight == 2);
  CHECK(convex == 4);
}

TEST_CASE("focus box index 2 and holonomy rebasing invariance") {
  Atlas a = focus_box_atlas_k(2);
  ValidationReport rep = validate(a);
  CHECK(rep.pass);
  CHECK(rep.total_focus_index == 2);
  for (size_t ci = 0; ci < rep.classes.size(); ++ci) {
    if (rep.classes[ci].kind != VertexKind::Focus) continue;
    AffineT h = vertex_holonomy(a, ci);
    CHECK(focus_index(h.lin) == 2);
  }
}

TEST_CASE("two-square torus is flat and closed") {
  Atlas a = two_square_torus();
  ValidationReport rep = validate(a);
  REQUIRE(rep.structural.empty());
  CHECK(rep.pass);
  CHECK(rep.total_focus_index == 0);
  size_t interior = 0;
  for (const auto& vc : rep.classes) {
    CHECK(vc.is_interior);
    CHECK(vc.kind == VertexKind::Flat);
    CHECK(vc.germs.size() == 4);
    ++interior;
  }
  CHECK(interior == 2);
  CHECK(total_focus_index(a) == 0);
}

TEST_CASE("walk steps are mutually inverse") {
  for (const Atlas& a : {focus_box_atlas_k(1), two_square_torus()}) {
    Topology t = build_topology(a);
    for (size_t c = 0; c < a.charts.size(); ++c)
      for (size_t v = 0; v < a.charts[c].size(); ++v) {
        Germ g{c, v};
        if (auto nxt = t.next_ccw(g)) {
          auto back = t.next_cw(nxt->first);
          REQUIRE(back.has_value());
          CHECK(back->first == g);
          CHECK(back->second.compose(nxt->second) == AffineT::identity());
        }
      }
  }
}

TEST_CASE("undeclared focus and wrong index are invalid") {
  Atlas a = focus_box_atlas_k(1);
  a.focus.clear();
  ValidationReport rep = validate(a);
  CHECK_FALSE(rep.pass);
  bool found = false;
  for (const auto& vc : rep.classes)
    if (vc.kind == VertexKind::Invalid) {
      found = true;
      CHECK(vc.message == "undeclared nontrivial holonomy");
    }
  CHECK(found);
  CHECK_THROWS_AS(total_focus_index(a), StructuralError);

  a = focus_box_atlas_k(1);
  a.focus[0].index = 2;
  rep = validate(a);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("endpoint mismatch is reported") {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
  a.charts.push_back(mk({{2, 0}, {5, 0}, {5, 3}, {2, 3}}));
  // length-2 edge against a length-3 edge
  a.gluings.push_back({{0, 1}, {1, 3}, AffineT::identity(), ""});
  ValidationReport rep = validate(a);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.gluings.size() == 1);
  CHECK_FALSE(rep.gluings[0].endpoints_match);
  CHECK(rep.gluings[0].message == "EndpointMismatch");
}

TEST_CASE("disconnected atlas fails") {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {1, 0}, {0, 1}}));
  a.charts.push_back(mk({{5, 0}, {6, 0}, {5, 1}}));
  ValidationReport rep = validate(a);
  CHECK_FALSE(rep.connected);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("boundary corner classification is affine, not metric") {
  // Square corner plus an obtuse triangle corner; the gluing map decides
  // the developed angle.
  auto build = [](const LinZ& lin) {
    Atlas a;
    a.charts.push_back(mk({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    a.charts.push_back(mk({{0, 0}, {4, 1}, {-4, 1}}));
    a.gluings.push_back({{0, 3}, {1, 0}, AffineT{lin, {}}, ""});
    return a;
  };
  // (0,1) -> (4,1), shear: developed fan stays under pi.
  ValidationReport r1 = validate(build(LinZ{1, 4, 0, 1}));
  // same edge identification, different unimodular map: fan passes pi.
  ValidationReport r2 = validate(build(LinZ{-3, 4, -1, 1}));
  for (const auto* rep : {&r1, &r2}) {
    REQUIRE(rep->structural.empty());
    for (const auto& gc : rep->gluings) {
      CHECK(gc.endpoints_match);
      CHECK(gc.orientation_ok);
    }
  }
  auto corner_at = [](const ValidationReport& rep) {
    for (const auto& vc : rep.classes)
      if (!vc.is_interior && vc.germs.size() == 2) return *vc.corner;
    FAIL("no two-germ corner");
    return CornerKind::Convex;
  };
  CHECK(corner_at(r1) == CornerKind::Convex);
  CHECK(corner_at(r2) == CornerKind::Concave);
}

TEST_CASE("single square rolls into a cylinder") {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  a.gluings.push_back({{0, 0}, {0, 2}, AffineT{LinZ::identity(), {Q(0), Q(1)}}, ""});
  ValidationReport rep = validate(a);
  REQUIRE(rep.structural.empty());
  CHECK(rep.pass);
  for (const auto& vc : rep.classes) {
    CHECK_FALSE(vc.is_interior);
    CHECK(*vc.corner == CornerKind::Straight);
  }
}

TEST_CASE("structural errors throw") {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {1, 0}, {0, 1}}));
  a.gluings.push_back({{0, 0}, {5, 1}, AffineT::identity(), ""});
  CHECK_THROWS_AS(build_topology(a), StructuralError);
  CHECK_THROWS_AS(validate(a), StructuralError);

  Atlas b = focus_box_atlas_k(1);
  b.focus[0].at.vertex = 99;
  CHECK_THROWS_AS(validate(b), StructuralError);

  // doubled edge use is a report failure, not a throw, in validate
  Atlas c = two_square_torus();
  c.gluings.push_back(c.gluings[0]);
  CHECK_THROWS_AS(build_topology(c), StructuralError);
  ValidationReport rep = validate(c);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.structural.empty());

  CHECK_THROWS_AS(vertex_holonomy(focus_box_atlas_k(1), 999), StructuralError);
}

TEST_CASE("boundary vertex holonomy is refused") {
  Atlas a = focus_box_atlas_k(1);
  Topology t = build_topology(a);
  for (size_t ci = 0; ci < t.classes.size(); ++ci)
    if (!t.interior[ci]) {
      CHECK_THROWS_AS(vertex_holonomy(a, ci), BoundaryVertex);
      return;
    }
  FAIL("expected a boundary class");
}

TEST_CASE("bad polygons are reported") {
  Atlas a;
  a.charts.push_back(mk({{0, 0}, {1, 0}}));
  CHECK_FALSE(validate(a).pass);

  Atlas b;
  b.charts.push_back(mk({{0, 0}, {1, 0}, {1, 1}, {0, 2}, {1, 2}}));  // reflex corner
  CHECK_FALSE(validate(b).pass);
  CHECK_FALSE(validate(b).structural.empty());

  Atlas c;
  c.charts.push_back(mk({{0, 0}, {1, 0}, {1, 0}, {0, 1}}));  // repeated vertex
  CHECK_FALSE(validate(c).pass);
}
