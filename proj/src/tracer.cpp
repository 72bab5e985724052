#include "affinefocus/tracer.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "affinefocus/errors.hpp"

namespace af {

namespace {

struct Ctx {
  const Atlas* a = nullptr;
  Topology topo;
  std::map<size_t, long> focus_class;  // vertex class -> declared index

  const Chart& chart(size_t c) const { return a->charts[c]; }
};

Ctx make_ctx(const Atlas& a) {
  Ctx ctx;
  ctx.a = &a;
  ctx.topo = build_topology(a);
  for (const auto& f : a.focus) {
    auto it = ctx.topo.class_of.find(f.at);
    if (it == ctx.topo.class_of.end()) throw StructuralError("focus germ does not exist");
    ctx.focus_class[it->second] = f.index;
  }
  return ctx;
}

Vec2 u_out(const Ctx& ctx, const Germ& g) { return ctx.chart(g.chart).edge_vec(g.vertex); }

Vec2 u_in(const Ctx& ctx, const Germ& g) {
  const Chart& c = ctx.chart(g.chart);
  return -c.edge_vec(g.vertex + c.size() - 1);
}

AffineT cycle_holonomy(const Ctx& ctx, const Germ& g0) {
  size_t n = ctx.topo.classes[ctx.topo.class_of.at(g0)].size();
  Germ g = g0;
  AffineT d = AffineT::identity();
  for (size_t i = 0; i < n; ++i) {
    auto nx = ctx.topo.next_ccw(g);
    if (!nx) throw StructuralError("interior walk reached the boundary");
    g = nx->first;
    d = d.compose(nx->second);
  }
  if (!(g == g0)) throw StructuralError("vertex cycle does not close");
  return d;
}

// Walk the star of germs from g0 until the half-open developed sector
// [u_out, u_in) of a germ contains dir. One full lap covers every direction
// exactly once; for a focus vertex the counterclockwise and clockwise laps
// disagree by the monodromy, which is precisely the branching.
std::pair<Germ, AffineT> sector_search(const Ctx& ctx, const Germ& g0, const Vec2& dir,
                                       bool ccw) {
  size_t n = ctx.topo.classes[ctx.topo.class_of.at(g0)].size();
  Germ g = g0;
  AffineT d = AffineT::identity();
  for (size_t i = 0; i <= n; ++i) {
    Vec2 lo = d.apply_dir(u_out(ctx, g));
    Vec2 hi = d.apply_dir(u_in(ctx, g));
    if (same_ray(dir, lo) || sector_contains_strict(lo, hi, dir)) return {g, d};
    auto nx = ccw ? ctx.topo.next_ccw(g) : ctx.topo.next_cw(g);
    if (!nx) throw StructuralError("interior walk reached the boundary");
    g = nx->first;
    d = d.compose(nx->second);
  }
  throw StructuralError("no sector of the vertex star contains the direction");
}

// Same search over a boundary chain; both chain ends are closed so that rays
// along the unglued edges still count as entering the surface.
std::optional<std::pair<Germ, AffineT>> boundary_search(const Ctx& ctx, const Germ& g0,
                                                        const Vec2& dir) {
  size_t n = ctx.topo.classes[ctx.topo.class_of.at(g0)].size();
  Germ g = g0;
  AffineT d = AffineT::identity();
  for (size_t i = 0; i < n; ++i) {
    auto nx = ctx.topo.next_cw(g);
    if (!nx) break;
    g = nx->first;
    d = d.compose(nx->second);
  }
  for (size_t i = 0; i < n; ++i) {
    Vec2 lo = d.apply_dir(u_out(ctx, g));
    Vec2 hi = d.apply_dir(u_in(ctx, g));
    if (same_ray(dir, lo) || sector_contains_strict(lo, hi, dir)) return {{g, d}};
    auto nx = ctx.topo.next_ccw(g);
    if (!nx) {
      if (same_ray(dir, hi)) return {{g, d}};
      return std::nullopt;
    }
    g = nx->first;
    d = d.compose(nx->second);
  }
  return std::nullopt;
}

struct ChartExit {
  Vec2 q;
  bool at_vertex = false;
  size_t index = 0;  // vertex index, or edge index
};

bool on_edge(const Chart& c, size_t e, const Vec2& p) {
  Vec2 w = c.edge_vec(e);
  Vec2 r = p - c.vertex(e);
  if (cross(w, r) != 0) return false;
  Q t = dot(r, w);
  return t >= 0 && t <= dot(w, w);
}

ChartExit advance(const Chart& c, const Vec2& p, const Vec2& d) {
  size_t n = c.size();
  // a ray on an edge and parallel to it slides to the edge's far end
  for (size_t i = 0; i < n; ++i) {
    Vec2 w = c.edge_vec(i);
    if (cross(d, w) != 0 || !on_edge(c, i, p)) continue;
    size_t j = same_ray(d, w) ? (i + 1) % n : i;
    if (c.vertex(j) == p) continue;
    return {c.vertex(j), true, j};
  }
  std::optional<Q> best;
  for (size_t i = 0; i < n; ++i) {
    Vec2 w = c.edge_vec(i);
    Q cw = cross(d, w);
    if (cw <= 0) continue;
    Q t = cross(c.vertex(i) - p, w) / cw;
    if (t < 0) continue;
    if (!best || t < *best) best = t;
  }
  if (!best) throw StructuralError("ray does not leave the chart");
  Vec2 q = p + d * *best;
  for (size_t j = 0; j < n; ++j)
    if (c.vertex(j) == q) return {q, true, j};
  for (size_t i = 0; i < n; ++i)
    if (cross(d, c.edge_vec(i)) > 0 && on_edge(c, i, q)) return {q, false, i};
  throw StructuralError("chart exit point is not on the boundary");
}

void record_bits(Trace& t, const Vec2& p, const Vec2& d) {
  t.max_bits = std::max({t.max_bits, bit_size(p), bit_size(d)});
}

// Core loop: one chart-interior run per iteration, then either terminate or
// hand over to the next chart. link maps the upcoming step's chart
// coordinates into the previous step's.
void run(const Ctx& ctx, Trace& t, size_t chart, Vec2 p, Vec2 d, AffineT link) {
  while (true) {
    record_bits(t, p, d);
    ChartExit ex = advance(ctx.chart(chart), p, d);
    t.steps.push_back({chart, p, ex.q, link});
    record_bits(t, ex.q, d);
    t.end = {chart, ex.q};
    t.end_dir = d;

    if (ex.at_vertex) {
      Germ g0{chart, ex.index};
      size_t ci = ctx.topo.class_of.at(g0);
      if (!ctx.topo.interior[ci]) {
        t.events.push_back({EventKind::BoundaryHit, 0, 0, EdgeRef{chart, ex.index}});
        return;
      }
      bool is_focus = ctx.focus_class.count(ci) > 0;
      AffineT h = cycle_holonomy(ctx, g0);
      if (is_focus && !(h.lin.apply(d) == d)) {
        t.events.push_back({EventKind::FocusHit, 0, ci, {}});
        t.hit_germ = g0;
        return;
      }
      if (!is_focus && !(h == AffineT::identity()))
        throw StructuralError("nontrivial holonomy at an undeclared vertex");
      if (t.budget_left == 0) {
        t.events.push_back({EventKind::StepLimit, 0, 0, {}});
        return;
      }
      --t.budget_left;
      auto [g1, dev] = sector_search(ctx, g0, d, true);
      t.events.push_back({EventKind::FlatVertexPass, 0, ci, {}});
      chart = g1.chart;
      p = ctx.chart(chart).vertex(g1.vertex);
      d = dev.inverse().apply_dir(d);
      link = dev;
      continue;
    }

    EdgeRef er{chart, ex.index};
    auto gl = ctx.topo.gluing_at(er);
    if (!gl) {
      t.events.push_back({EventKind::BoundaryHit, 0, 0, er});
      return;
    }
    if (t.budget_left == 0) {
      t.events.push_back({EventKind::StepLimit, 0, 0, {}});
      return;
    }
    --t.budget_left;
    t.events.push_back({EventKind::EdgeCross, gl->first, 0, {}});
    const Gluing& g = ctx.a->gluings[gl->first];
    if (gl->second) {
      chart = g.dst.chart;
      p = g.map.apply(ex.q);
      d = g.map.apply_dir(d);
      link = g.map.inverse();
    } else {
      AffineT inv = g.map.inverse();
      chart = g.src.chart;
      p = inv.apply(ex.q);
      d = inv.apply_dir(d);
      link = g.map;
    }
  }
}

}  // namespace

Trace trace(const Atlas& a, const Ray& r, long budget) {
  if (r.dir == Vec2{}) throw InvalidArgument("ray direction is zero");
  if (budget < 0) throw InvalidArgument("negative budget");
  Ctx ctx = make_ctx(a);
  if (r.start.chart >= a.charts.size() ||
      !chart_contains(a.charts[r.start.chart], r.start.pos))
    throw InvalidStart();

  Trace t;
  t.budget_left = budget;
  size_t chart = r.start.chart;
  Vec2 p = r.start.pos;
  Vec2 d = r.dir;

  // a start on a vertex is re-homed to the germ whose sector holds dir
  const Chart& c0 = a.charts[chart];
  for (size_t j = 0; j < c0.size(); ++j) {
    if (!(c0.v[j] == p)) continue;
    Germ g0{chart, j};
    size_t ci = ctx.topo.class_of.at(g0);
    std::optional<std::pair<Germ, AffineT>> home;
    if (ctx.topo.interior[ci])
      home = sector_search(ctx, g0, d, true);
    else
      home = boundary_search(ctx, g0, d);
    if (!home) {
      t.steps.push_back({chart, p, p, AffineT::identity()});
      t.end = {chart, p};
      t.end_dir = d;
      t.events.push_back({EventKind::BoundaryHit, 0, 0, EdgeRef{chart, j}});
      return t;
    }
    chart = home->first.chart;
    p = ctx.chart(chart).vertex(home->first.vertex);
    d = home->second.inverse().apply_dir(d);
    break;
  }

  run(ctx, t, chart, p, d, AffineT::identity());
  return t;
}

Trace extend_through_focus(const Atlas& a, const Trace& t, Side side) {
  if (t.events.empty() || t.events.back().kind != EventKind::FocusHit)
    throw InvalidArgument("trace does not end in a focus hit");
  Ctx ctx = make_ctx(a);
  Germ g0 = t.hit_germ;
  Vec2 d = t.end_dir;
  AffineT h = cycle_holonomy(ctx, g0);
  if (h.lin.apply(d) == d) throw Eigendirection();
  auto [g1, dev] = sector_search(ctx, g0, d, side == Side::Left);
  Trace out = t;
  out.branch_choices.push_back(side);
  run(ctx, out, g1.chart, ctx.chart(g1.chart).vertex(g1.vertex),
      dev.inverse().apply_dir(d), dev);
  return out;
}

Developed develop(const Atlas& a, const Trace& t) {
  Developed out;
  AffineT frame = AffineT::identity();
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& s = t.steps[i];
    if (i > 0) frame = frame.compose(s.from_prev);
    Vec2 e = frame.apply(s.entry);
    Vec2 x = frame.apply(s.exit);
    if (out.polyline.empty() || !(out.polyline.back() == e)) out.polyline.push_back(e);
    if (!(out.polyline.back() == x)) out.polyline.push_back(x);
    std::vector<Vec2> poly;
    poly.reserve(a.charts[s.chart].size());
    for (const Vec2& v : a.charts[s.chart].v) poly.push_back(frame.apply(v));
    out.corridor.push_back(std::move(poly));
  }
  return out;
}

}  // namespace af
