#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affinefocus/box_model.hpp"
#include "affinefocus/errors.hpp"

using namespace af;

static BoxPoint bp2(Q f, Q g) { return BoxPoint{{std::move(f), std::move(g)}}; }

TEST_CASE("piecewise-linear profile evaluation") {
  CritProfile p;
  p.arg = AffineFunc::coordinate(0, 1);
  p.pts = {{Q(0), Q(1)}, {Q(2), Q(0)}, {Q(3), Q(2)}};
  CHECK(p.eval_at(Q(0)) == 1);
  CHECK(p.eval_at(Q(1)) == Q(1, 2));
  CHECK(p.eval_at(Q(2)) == 0);
  CHECK(p.eval_at(Q(5, 2)) == 1);
  CHECK(p.eval_at(Q(-2)) == 2);  // extends the first segment
  CHECK(p.eval_at(Q(4)) == 4);   // extends the last segment
  CritProfile c = CritProfile::constant(Q(7), 3);
  CHECK(c.eval({Q(1), Q(2), Q(3)}) == 7);
}

TEST_CASE("focus box both-branch case iii") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  auto cands = candidate_segments(m, bp2(Q(-1), Q(0)), bp2(Q(1), Q(-1, 2)));
  REQUIRE(cands.size() == 2);
  for (const auto& c : cands) {
    REQUIRE(c.checks.size() == 1);
    CHECK(c.checks[0].t == Q(1, 2));
    CHECK(c.straight);
    if (c.branch[0] == Branch::L)
      CHECK(c.checks[0].margin == Q(-1, 4));
    else
      CHECK(c.checks[0].margin == Q(1, 4));
  }
  CHECK(segment_exists(m, bp2(Q(-1), Q(0)), bp2(Q(1), Q(-1, 2))).count == 2);
}

TEST_CASE("focus box single-branch case i") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  auto dec = segment_exists(m, bp2(Q(-1), Q(0)), bp2(Q(1), Q(1)));
  REQUIRE(dec.count == 1);
  REQUIRE(dec.witnesses.size() == 1);
  CHECK(dec.witnesses[0].cand.branch[0] == Branch::R);
  CHECK(dec.witnesses[0].cand.checks[0].margin == Q(1));  // G_r midpoint 1 vs crit 0
}

TEST_CASE("negative index box loses a pair") {
  WallModel m = focus_box_model(Q(-1), Q(1), Q(2));
  auto cands = candidate_segments(m, bp2(Q(-1), Q(0)), bp2(Q(1), Q(1, 2)));
  REQUIRE(cands.size() == 2);
  for (const auto& c : cands) {
    CHECK_FALSE(c.straight);
    if (c.branch[0] == Branch::L)
      CHECK(c.checks[0].margin == Q(1, 4));
    else
      CHECK(c.checks[0].margin == Q(-1, 4));
  }
  CHECK(segment_exists(m, bp2(Q(-1), Q(0)), bp2(Q(1), Q(1, 2))).count == 0);
}

TEST_CASE("flat pairs and on-wall endpoints") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  CHECK(segment_exists(m, bp2(Q(-1), Q(1)), bp2(Q(-1, 2), Q(-1))).count == 1);
  // Endpoint exactly on the wall: no branching.
  auto cands = candidate_segments(m, bp2(Q(0), Q(1)), bp2(Q(1), Q(-1)));
  CHECK(cands.size() == 1);
  CHECK(cands[0].crossed.empty());
  CHECK(segment_exists(m, bp2(Q(0), Q(-2)), bp2(Q(0), Q(2))).count == 1);
}

TEST_CASE("crossing at the critical value counts both branches") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  auto dec = segment_exists(m, bp2(Q(-1), Q(1)), bp2(Q(1), Q(-1)));
  CHECK(dec.count == 2);
}

TEST_CASE("one crossed wall with positive index always yields a segment") {
  WallModel m = focus_box_model(Q(2), Q(1), Q(3));
  auto pts = grid_points(m, 7);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      auto dec = segment_exists(m, pts[i], pts[j]);
      CHECK(dec.count >= 1);
      CHECK(dec.count <= 2);
      for (const auto& w : dec.witnesses) CHECK(certify_witness(m, pts[i], pts[j], w));
    }
}

TEST_CASE("trichotomy margins") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  auto pts = grid_points(m, 9);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      auto cands = candidate_segments(m, pts[i], pts[j]);
      if (cands.size() != 2) continue;
      Q ml, mr;
      for (const auto& c : cands)
        (c.branch[0] == Branch::L ? ml : mr) = c.checks[0].margin;
      CHECK(mr > ml);  // forces at least one valid branch
      long count = segment_exists(m, pts[i], pts[j]).count;
      if (ml > 0)
        CHECK(count == 1);  // only r can hold
      else if (mr < 0)
        CHECK(count == 1);  // only l can hold
      else
        CHECK(count == 2);
    }
}

TEST_CASE("focus^2 witness breaks all four branch vectors") {
  auto [m, a, b] = nonconvex_focus2_model();
  auto cands = candidate_segments(m, a, b);
  REQUIRE(cands.size() == 4);
  for (const auto& c : cands) {
    REQUIRE(c.checks.size() == 2);
    CHECK(c.checks[0].t == Q(1, 2));
    CHECK(c.checks[1].t == Q(1, 2));
    CHECK_FALSE(c.straight);
    int broken = 0;
    for (const auto& ch : c.checks) broken += !ch.valid;
    CHECK(broken == 1);  // each branch vector fails on exactly one wall
    bool l1 = c.branch[0] == Branch::L, l2 = c.branch[1] == Branch::L;
    const WallCheck& w1 = c.checks[0];
    const WallCheck& w2 = c.checks[1];
    if (l1 && l2) {
      CHECK_FALSE(w1.valid);
      CHECK(w1.margin == Q(1, 4));  // G1 = 0 vs crit1(0) = -1/4
    } else if (!l1 && !l2) {
      CHECK_FALSE(w1.valid);
      CHECK(w1.margin == Q(-1, 4));  // G1 = 1/2 vs crit1(1/2) = 3/4
    } else if (!l1 && l2) {
      CHECK_FALSE(w2.valid);
      CHECK(w2.margin == Q(1, 4));  // G2 = 0 vs crit2(1/2) = -1/4
    } else {
      CHECK_FALSE(w2.valid);
      CHECK(w2.margin == Q(-1, 4));  // G2 = 1/2 vs crit2(0) = 3/4
    }
  }
  CHECK(segment_exists(m, a, b).count == 0);
}

TEST_CASE("dim-3 two-wall model") {
  auto [m, a, b] = dim3_two_curve_model();
  CHECK(m.dim() == 3);
  CHECK(segment_exists(m, a, b).count == 0);

  BoxPoint known_a{{Q(-1), Q(0), Q(0)}};
  BoxPoint known_b{{Q(1), Q(0), Q(0)}};
  auto cands = candidate_segments(m, known_a, known_b);
  REQUIRE(cands.size() == 4);
  for (const auto& c : cands) CHECK_FALSE(c.straight);

  // Both walls on one side: ordinary convex box.
  CHECK(segment_exists(m, BoxPoint{{Q(-1), Q(0), Q(0)}}, BoxPoint{{Q(-3, 4), Q(1, 4), Q(-1, 2)}})
            .count == 1);

  // Crossing only the first wall, far below its critical values.
  auto dec = segment_exists(m, BoxPoint{{Q(-1), Q(-1), Q(0)}}, BoxPoint{{Q(1, 4), Q(-3, 4), Q(0)}});
  REQUIRE(dec.count == 1);
  CHECK(dec.witnesses[0].cand.branch[0] == Branch::L);
}

TEST_CASE("scan reports") {
  WallModel box = focus_box_model(Q(1), Q(1), Q(2));
  ScanReport r = convexity_scan(box, 9);
  CHECK(r.min_count == 1);
  CHECK(r.max_count == 2);
  CHECK(r.zero_pair_count == 0);

  // Grid 5 has no obstructed pair for this box (the margin granularity is
  // too coarse); grid 7 does, e.g. (-1/3,0) to (1,2/3).
  WallModel neg_box = focus_box_model(Q(-1), Q(1), Q(2));
  ScanReport neg = convexity_scan(neg_box, 7);
  CHECK(neg.zero_pair_count >= 1);
  for (const auto& [a, b] : neg.zero_pairs) CHECK(segment_exists(neg_box, a, b).count == 0);
  CHECK(segment_exists(neg_box, bp2(Q(-1, 3), Q(0)), bp2(Q(1), Q(2, 3))).count == 0);

  auto [f2, fa, fb] = nonconvex_focus2_model();
  ScanReport s2 = convexity_scan(f2, 3);
  CHECK(s2.zero_pair_count >= 1);
}

TEST_CASE("serial and parallel scans agree") {
  for (const WallModel& m :
       {focus_box_model(Q(1), Q(1), Q(2)), focus_box_model(Q(-1), Q(1), Q(2)),
        std::get<0>(nonconvex_focus2_model())}) {
    ScanReport s = convexity_scan(m, 5, Exec::Serial);
    ScanReport p = convexity_scan(m, 5, Exec::OpenMP);
    CHECK(s.points == p.points);
    CHECK(s.pairs == p.pairs);
    CHECK(s.min_count == p.min_count);
    CHECK(s.max_count == p.max_count);
    CHECK(s.zero_pair_count == p.zero_pair_count);
    REQUIRE(s.zero_pairs.size() == p.zero_pairs.size());
    for (size_t i = 0; i < s.zero_pairs.size(); ++i) {
      CHECK(s.zero_pairs[i].first == p.zero_pairs[i].first);
      CHECK(s.zero_pairs[i].second == p.zero_pairs[i].second);
    }
  }
}

TEST_CASE("bounds and degeneracy errors") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  CHECK_THROWS_AS(candidate_segments(m, bp2(Q(-2), Q(0)), bp2(Q(0), Q(0))), OutOfBounds);
  // l-value in range but r-branch value escapes the G bound
  CHECK_THROWS_AS(candidate_segments(m, bp2(Q(1), Q(2)), bp2(Q(0), Q(0))), OutOfBounds);
  CHECK_THROWS_AS(candidate_segments(m, bp2(Q(0), Q(0)), bp2(Q(0), Q(0))), DegeneratePair);
  CHECK(in_bounds(m, bp2(Q(1), Q(1))));
  CHECK_FALSE(in_bounds(m, bp2(Q(1), Q(3, 2))));

  WallModel bad = m;
  bad.walls[0].k = 0;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = m;
  bad.walls[0].functional = AffineFunc::coordinate(1, 2);  // multi-valued coordinate
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = m;
  bad.walls[0].crit.pts = {{Q(1), Q(0)}, {Q(0), Q(0)}};
  CHECK_THROWS_AS(bad.validate(), StructuralError);
}

TEST_CASE("grid points respect branch bounds") {
  WallModel m = focus_box_model(Q(1), Q(1), Q(2));
  auto pts = grid_points(m, 3);
  bool has_origin = false, has_corner = false;
  for (const auto& p : pts) {
    if (p.c == std::vector<Q>{Q(0), Q(0)}) has_origin = true;
    if (p.c == std::vector<Q>{Q(1), Q(2)}) has_corner = true;
  }
  CHECK(has_origin);
  CHECK_FALSE(has_corner);  // r-branch value 3 escapes the G bound
  CHECK(pts.size() == 8);
}
