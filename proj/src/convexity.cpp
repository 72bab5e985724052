#include "affinefocus/convexity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "affinefocus/errors.hpp"

namespace af {

namespace {

constexpr size_t kPassageCap = 64;
constexpr size_t kBranchCap = 256;

bool on_edge_span(const Chart& c, size_t e, const Vec2& p) {
  Vec2 w = c.edge_vec(e);
  Vec2 r = p - c.vertex(e);
  if (cross(w, r) != 0) return false;
  Q t = dot(w, r);
  return t >= 0 && t <= dot(w, w);
}

bool sp_less(const SurfacePoint& a, const SurfacePoint& b) {
  if (a.chart != b.chart) return a.chart < b.chart;
  return lex_less(a.pos, b.pos);
}

// Every (chart, position) pair representing the same surface point: the
// point itself, the far side of any glued edge it lies on, or every germ of
// its vertex class. Immersed charts may list one point twice; all pairs are
// kept. Throws InvalidPoint when the point is not on its chart.
std::vector<SurfacePoint> copies_of(const Atlas& a, const Topology& t, const SurfacePoint& s) {
  if (s.chart >= a.charts.size()) throw InvalidPoint("chart id out of range");
  const Chart& c = a.charts[s.chart];
  if (c.size() < 3 || !chart_contains(c, s.pos)) throw InvalidPoint("point lies outside its chart");
  std::vector<SurfacePoint> out;
  for (size_t j = 0; j < c.size(); ++j) {
    if (!(c.v[j] == s.pos)) continue;
    size_t ci = t.class_of.at(Germ{s.chart, j});
    for (const Germ& g : t.classes[ci])
      out.push_back({g.chart, a.charts[g.chart].vertex(g.vertex)});
    break;
  }
  if (out.empty()) {
    out.push_back(s);
    for (size_t e = 0; e < c.size(); ++e) {
      if (!on_edge_span(c, e, s.pos)) continue;
      auto gl = t.gluing_at(EdgeRef{s.chart, e});
      if (!gl) continue;
      const Gluing& g = a.gluings[gl->first];
      if (gl->second)
        out.push_back({g.dst.chart, g.map.apply(s.pos)});
      else
        out.push_back({g.src.chart, g.map.inverse().apply(s.pos)});
    }
  }
  std::sort(out.begin(), out.end(), sp_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Closed direction cone spanning less than a half turn counterclockwise
// from lo to hi; lo == hi is a single ray and full is everything.
struct Cone {
  Vec2 lo, hi;
  bool full = false;
};

bool ray_in(const Cone& k, const Vec2& d) {
  if (k.full) return true;
  return (cross(k.lo, d) > 0 && cross(d, k.hi) > 0) || same_ray(d, k.lo) || same_ray(d, k.hi);
}

std::optional<Cone> meet(const Cone& k, const Cone& c) {
  if (k.full) return c;
  if (c.full) return k;
  Vec2 lo, hi;
  if (ray_in(k, c.lo))
    lo = c.lo;
  else if (ray_in(c, k.lo))
    lo = k.lo;
  else
    return std::nullopt;
  if (ray_in(k, c.hi))
    hi = c.hi;
  else if (ray_in(c, k.hi))
    hi = k.hi;
  else
    return std::nullopt;
  Q cr = cross(lo, hi);
  if (cr < 0 || (cr == 0 && !same_ray(lo, hi))) return std::nullopt;
  Cone r{lo, hi, false};
  if (!ray_in(k, lo) || !ray_in(c, lo) || !ray_in(k, hi) || !ray_in(c, hi)) return std::nullopt;
  return r;
}

// Directions from apex that exit through edge [A, B] of a developed chart.
// An apex strictly inside the span sees the edge from both sides at once;
// the copy of the point on the far chart owns those corridors, so none are
// seeded here.
std::optional<Cone> edge_cone(const Vec2& apex, const Vec2& A, const Vec2& B) {
  Vec2 u = A - apex, v = B - apex;
  bool uz = u == Vec2{}, vz = v == Vec2{};
  if (uz && vz) return std::nullopt;
  if (uz) return Cone{v, v, false};
  if (vz) return Cone{u, u, false};
  Q c = cross(u, v);
  if (c > 0) return Cone{u, v, false};
  if (c < 0) return std::nullopt;  // apex behind the edge line: entry only, never an exit
  if (dot(u, v) > 0) return Cone{u, u, false};
  return std::nullopt;  // apex inside the span
}

AffineT class_holonomy(const Topology& t, const Germ& g0) {
  size_t n = t.classes[t.class_of.at(g0)].size();
  Germ g = g0;
  AffineT d = AffineT::identity();
  for (size_t i = 0; i < n; ++i) {
    auto nx = t.next_ccw(g);
    if (!nx) throw StructuralError("vertex star walk reached the boundary");
    g = nx->first;
    d = d.compose(nx->second);
  }
  if (!(g == g0)) throw StructuralError("vertex star does not close");
  return d;
}

std::vector<std::tuple<size_t, Vec2, Vec2>> canon_core(const Atlas& a, const Topology& t,
                                                       const CorridorWitness& w) {
  std::vector<std::tuple<size_t, Vec2, Vec2>> out;
  auto lt = [](const std::tuple<size_t, Vec2, Vec2>& x, const std::tuple<size_t, Vec2, Vec2>& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
    if (!(std::get<1>(x) == std::get<1>(y))) return lex_less(std::get<1>(x), std::get<1>(y));
    return lex_less(std::get<2>(x), std::get<2>(y));
  };
  for (const WitnessPiece& p : w.pieces) {
    if (p.entry == p.exit) continue;
    const Chart& c = a.charts[p.chart];
    Vec2 seg = p.exit - p.entry;
    Q len2 = dot(seg, seg);
    std::vector<Q> cuts;
    for (size_t j = 0; j < c.size(); ++j) {
      Vec2 r = c.v[j] - p.entry;
      if (cross(seg, r) != 0) continue;
      Q s = dot(seg, r);
      if (s <= 0 || s >= len2) continue;
      cuts.push_back(s / len2);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Vec2> bps{p.entry};
    for (const Q& s : cuts) bps.push_back(p.entry + seg * s);
    bps.push_back(p.exit);
    for (size_t i = 0; i + 1 < bps.size(); ++i) {
      std::tuple<size_t, Vec2, Vec2> best{p.chart, bps[i], bps[i + 1]};
      auto consider = [&](size_t ch, const Vec2& u, const Vec2& v) {
        std::tuple<size_t, Vec2, Vec2> cand{ch, u, v};
        if (lt(cand, best)) best = cand;
      };
      consider(p.chart, bps[i + 1], bps[i]);
      for (size_t e = 0; e < c.size(); ++e) {
        if (!on_edge_span(c, e, bps[i]) || !on_edge_span(c, e, bps[i + 1])) continue;
        auto gl = t.gluing_at(EdgeRef{p.chart, e});
        if (!gl) continue;
        const Gluing& g = a.gluings[gl->first];
        AffineT m = gl->second ? g.map : g.map.inverse();
        size_t oc = gl->second ? g.dst.chart : g.src.chart;
        Vec2 mu = m.apply(bps[i]), mv = m.apply(bps[i + 1]);
        consider(oc, mu, mv);
        consider(oc, mv, mu);
      }
      out.push_back(best);
    }
  }
  return out;
}

std::string canon_key(const Atlas& a, const Topology& t, const CorridorWitness& w) {
  std::string k;
  for (const auto& [c, u, v] : canon_core(a, t, w)) {
    k += std::to_string(c);
    k += ':';
    k += u.x.get_str();
    k += ',';
    k += u.y.get_str();
    k += '>';
    k += v.x.get_str();
    k += ',';
    k += v.y.get_str();
    k += ';';
  }
  return k;
}

// Corridor state of the direction-cone funnel. to_start develops this
// chart into the frame of the seed copy of p; pa, pb is the developed
// portal crossed to get here.
struct Node {
  int parent = -1;
  size_t chart = 0;
  size_t entry_edge = SIZE_MAX;
  long used = 0;
  AffineT to_start = AffineT::identity();
  Cone cone;
  Vec2 apex;
  Vec2 pa, pb;
};

struct Funnel {
  const Atlas& a;
  const Topology& topo;
  long budget;
  size_t cap;
  std::vector<SurfacePoint> qc;
  std::map<size_t, std::vector<std::pair<size_t, size_t>>> focus_germs;  // chart -> (vertex, class)
  std::deque<Node> nodes;
  std::set<std::string> seen;
  SegmentSearch out;

  Funnel(const Atlas& a_, const Topology& t_, long budget_, size_t cap_)
      : a(a_), topo(t_), budget(budget_), cap(cap_) {
    std::set<size_t> fcl;
    for (const FocusSpec& f : a.focus) fcl.insert(topo.class_of.at(f.at));
    for (size_t ci : fcl)
      for (const Germ& g : topo.classes[ci]) focus_germs[g.chart].push_back({g.vertex, ci});
  }

  std::vector<const Node*> chain(size_t ni) const {
    std::vector<const Node*> c;
    for (int i = int(ni); i >= 0; i = nodes[size_t(i)].parent) c.push_back(&nodes[size_t(i)]);
    std::reverse(c.begin(), c.end());
    return c;
  }

  // Exact crossing points of the ray apex -> x through every portal of the
  // corridor, in order; empty result means the straight segment does not
  // thread the corridor.
  std::optional<std::vector<Vec2>> portal_points(const std::vector<const Node*>& ch,
                                                 const Vec2& apex, const Vec2& x) const {
    Vec2 d = x - apex;
    std::vector<Vec2> pts;
    Q prev(0);
    for (size_t i = 1; i < ch.size(); ++i) {
      Vec2 w = ch[i]->pb - ch[i]->pa;
      Q den = cross(d, w);
      if (den == 0) return std::nullopt;
      Q t = cross(ch[i]->pa - apex, w) / den;
      if (t < prev || t > 1) return std::nullopt;
      Vec2 P = apex + d * t;
      Q s = dot(P - ch[i]->pa, w);
      if (s < 0 || s > dot(w, w)) return std::nullopt;
      pts.push_back(P);
      prev = t;
    }
    return pts;
  }

  std::vector<WitnessPiece> chain_pieces(const std::vector<const Node*>& ch,
                                         const std::vector<Vec2>& pts, const Vec2& apex,
                                         const Vec2& x) const {
    std::vector<WitnessPiece> pieces;
    for (size_t i = 0; i < ch.size(); ++i) {
      Vec2 de = i == 0 ? apex : pts[i - 1];
      Vec2 dx = i + 1 < ch.size() ? pts[i] : x;
      AffineT inv = ch[i]->to_start.inverse();
      pieces.push_back({ch[i]->chart, inv.apply(de), inv.apply(dx), ch[i]->to_start});
    }
    return pieces;
  }

  void push_witness(CorridorWitness w) {
    std::string k = canon_key(a, topo, w);
    if (!seen.insert(std::move(k)).second) return;
    out.witnesses.push_back(std::move(w));
  }

  // Walks the steps a branched continuation appended after a focus passage,
  // reporting every crossing of a copy of q and recursing on further
  // transversal focus hits. frame develops the chart the continuation
  // resumed from; base_cost is the crossing count at the first step's entry.
  void scan_continuation(const Trace& t, size_t offset, AffineT frame,
                         const std::vector<WitnessPiece>& prefix,
                         const std::vector<FocusPassage>& passages, const Vec2& apex,
                         long base_cost) {
    AffineT fr = frame;
    std::vector<WitnessPiece> acc = prefix;
    for (size_t i = offset; i < t.steps.size(); ++i) {
      const TraceStep& s = t.steps[i];
      fr = fr.compose(s.from_prev);
      Vec2 seg = s.exit - s.entry;
      if (!(seg == Vec2{})) {
        Q len2 = dot(seg, seg);
        for (const SurfacePoint& qq : qc) {
          if (qq.chart != s.chart) continue;
          Vec2 r = qq.pos - s.entry;
          if (i == offset && r == Vec2{}) continue;  // the focus itself, found by the funnel
          if (cross(seg, r) != 0) continue;
          Q sd = dot(seg, r);
          if (sd < 0 || sd > len2) continue;
          CorridorWitness w;
          w.pieces = acc;
          w.pieces.push_back({s.chart, s.entry, qq.pos, fr});
          w.passages = passages;
          w.dev_start = apex;
          w.dev_end = fr.apply(qq.pos);
          w.crossings = base_cost + long(i - offset);
          push_witness(std::move(w));
        }
      }
      acc.push_back({s.chart, s.entry, s.exit, fr});
    }
    const TraceEvent& ev = t.events.back();
    if (ev.kind == EventKind::StepLimit) {
      out.budget_limited = true;
      return;
    }
    if (ev.kind != EventKind::FocusHit) return;
    if (t.budget_left <= 0) {
      out.budget_limited = true;
      return;
    }
    if (passages.size() >= kPassageCap) {
      out.complete = false;
      return;
    }
    Trace tc = t;
    --tc.budget_left;  // a focus passage costs one crossing here
    long cost_end = base_cost + long(t.steps.size() - offset);
    for (Side side : {Side::Left, Side::Right}) {
      Trace t2 = extend_through_focus(a, tc, side);
      auto ps = passages;
      ps.push_back({acc.size() - 1, ev.vclass, side});
      scan_continuation(t2, t.steps.size(), fr, acc, ps, apex, cost_end);
    }
  }

  void seed(const SurfacePoint& copy) {
    Node r;
    r.chart = copy.chart;
    r.apex = copy.pos;
    r.cone.full = true;
    nodes.push_back(std::move(r));
  }

  void process(size_t ni) {
    const Node& n = nodes[ni];
    ++out.states;
    const Chart& c = a.charts[n.chart];
    std::vector<const Node*> ch;
    auto need_chain = [&]() {
      if (ch.empty()) ch = chain(ni);
      return &ch;
    };

    for (const SurfacePoint& qq : qc) {
      if (qq.chart != n.chart) continue;
      Vec2 x = n.to_start.apply(qq.pos);
      Vec2 d = x - n.apex;
      if (d == Vec2{}) continue;
      if (!ray_in(n.cone, d)) continue;
      auto pts = portal_points(*need_chain(), n.apex, x);
      if (!pts) continue;
      CorridorWitness w;
      w.pieces = chain_pieces(ch, *pts, n.apex, x);
      w.dev_start = n.apex;
      w.dev_end = x;
      w.crossings = n.used;
      push_witness(std::move(w));
    }

    auto fit = focus_germs.find(n.chart);
    if (fit != focus_germs.end()) {
      for (const auto& [vi, ci] : fit->second) {
        Vec2 fpos = c.vertex(vi);
        Vec2 x = n.to_start.apply(fpos);
        Vec2 d = x - n.apex;
        if (d == Vec2{}) continue;
        if (!ray_in(n.cone, d)) continue;
        auto pts = portal_points(*need_chain(), n.apex, x);
        if (!pts) continue;
        Vec2 dch = n.to_start.inverse().apply_dir(d);
        AffineT h = class_holonomy(topo, Germ{n.chart, vi});
        // Along the eigendirection the pass-through is straight in every
        // local development, so grazing corridors already cover it.
        if (h.lin.apply(dch) == dch) continue;
        long rem = budget - n.used - 1;
        if (rem < 0) {
          out.budget_limited = true;
          continue;
        }
        Trace t;
        t.events.push_back({EventKind::FocusHit, 0, ci, {}});
        t.end = {n.chart, fpos};
        t.end_dir = dch;
        t.hit_germ = {n.chart, vi};
        t.budget_left = rem;
        std::vector<WitnessPiece> prefix = chain_pieces(ch, *pts, n.apex, x);
        for (Side side : {Side::Left, Side::Right}) {
          Trace t2 = extend_through_focus(a, t, side);
          std::vector<FocusPassage> ps{{prefix.size() - 1, ci, side}};
          scan_continuation(t2, 0, n.to_start, prefix, ps, n.apex, n.used + 1);
        }
      }
    }

    for (size_t e = 0; e < c.size(); ++e) {
      if (e == n.entry_edge) continue;
      auto gl = topo.gluing_at(EdgeRef{n.chart, e});
      if (!gl) continue;
      Vec2 A = n.to_start.apply(c.vertex(e));
      Vec2 B = n.to_start.apply(c.vertex(e + 1));
      auto ec = edge_cone(n.apex, A, B);
      if (!ec) continue;
      auto k2 = meet(n.cone, *ec);
      if (!k2) continue;
      if (n.used >= budget) {
        out.budget_limited = true;
        continue;
      }
      if (nodes.size() >= cap) {
        out.complete = false;
        return;
      }
      const Gluing& g = a.gluings[gl->first];
      Node m;
      m.parent = int(ni);
      m.used = n.used + 1;
      m.cone = *k2;
      m.apex = n.apex;
      m.pa = A;
      m.pb = B;
      if (gl->second) {
        m.chart = g.dst.chart;
        m.entry_edge = g.dst.edge;
        m.to_start = n.to_start.compose(g.map.inverse());
      } else {
        m.chart = g.src.chart;
        m.entry_edge = g.src.edge;
        m.to_start = n.to_start.compose(g.map);
      }
      nodes.push_back(std::move(m));
    }
  }
};

}  // namespace

SegmentSearch segment_between(const Atlas& a, const SurfacePoint& p, const SurfacePoint& q,
                              long budget, size_t state_cap) {
  if (budget < 0) throw InvalidArgument("negative budget");
  Topology topo = build_topology(a);
  auto pc = copies_of(a, topo, p);
  auto qc = copies_of(a, topo, q);
  for (const SurfacePoint& x : pc)
    for (const SurfacePoint& y : qc)
      if (x == y) throw DegeneratePair();

  Funnel f(a, topo, budget, state_cap);
  f.qc = qc;
  for (const SurfacePoint& copy : pc) f.seed(copy);
  for (size_t ni = 0; ni < f.nodes.size(); ++ni) f.process(ni);
  return std::move(f.out);
}

std::vector<std::tuple<size_t, Vec2, Vec2>> canonical_path(const Atlas& a,
                                                           const CorridorWitness& w) {
  Topology topo = build_topology(a);
  return canon_core(a, topo, w);
}

bool witness_valid(const Atlas& a, const SurfacePoint& p, const SurfacePoint& q,
                   const CorridorWitness& w) {
  try {
    if (w.pieces.empty()) return false;
    Topology topo = build_topology(a);
    auto pc = copies_of(a, topo, p);
    auto qc = copies_of(a, topo, q);
    auto is_copy = [](const std::vector<SurfacePoint>& cs, size_t chart, const Vec2& pos) {
      for (const SurfacePoint& s : cs)
        if (s.chart == chart && s.pos == pos) return true;
      return false;
    };
    if (!is_copy(pc, w.pieces.front().chart, w.pieces.front().entry)) return false;
    if (!is_copy(qc, w.pieces.back().chart, w.pieces.back().exit)) return false;

    for (const WitnessPiece& piece : w.pieces) {
      if (piece.chart >= a.charts.size()) return false;
      const Chart& c = a.charts[piece.chart];
      if (!chart_contains(c, piece.entry) || !chart_contains(c, piece.exit)) return false;
      if (piece.to_start.lin.det() != 1) return false;
    }

    for (size_t i = 0; i + 1 < w.pieces.size(); ++i) {
      const WitnessPiece& x = w.pieces[i];
      const WitnessPiece& y = w.pieces[i + 1];
      if (!(x.to_start.apply(x.exit) == y.to_start.apply(y.entry))) return false;
      if (x.chart == y.chart && x.exit == y.entry && x.to_start == y.to_start) continue;
      auto xc = copies_of(a, topo, {x.chart, x.exit});
      if (!is_copy(xc, y.chart, y.entry)) return false;
      AffineT link = x.to_start.inverse().compose(y.to_start);  // y's chart into x's
      if (!(link.apply(y.entry) == x.exit)) return false;
      bool at_vertex = false;
      const Chart& cx = a.charts[x.chart];
      for (size_t j = 0; j < cx.size(); ++j)
        if (cx.v[j] == x.exit) at_vertex = true;
      if (!at_vertex) {
        // interior edge point: the link must be exactly the gluing map
        bool ok = false;
        for (size_t e = 0; e < cx.size() && !ok; ++e) {
          if (!on_edge_span(cx, e, x.exit)) continue;
          auto gl = topo.gluing_at(EdgeRef{x.chart, e});
          if (!gl) continue;
          const Gluing& g = a.gluings[gl->first];
          AffineT m = gl->second ? g.map.inverse() : g.map;
          size_t oc = gl->second ? g.dst.chart : g.src.chart;
          if (oc == y.chart && m == link) ok = true;
        }
        if (!ok) return false;
      }
    }

    std::vector<size_t> breaks;
    for (const FocusPassage& ps : w.passages) breaks.push_back(ps.piece);
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
      if (breaks[i] >= breaks[i + 1]) return false;
    if (!breaks.empty() && breaks.back() + 1 >= w.pieces.size()) return false;
    breaks.push_back(w.pieces.size() - 1);

    auto devp = [&](size_t i, bool entry) {
      const WitnessPiece& pp = w.pieces[i];
      return pp.to_start.apply(entry ? pp.entry : pp.exit);
    };
    size_t sec = 0;
    for (size_t b : breaks) {
      if (b >= w.pieces.size() || b < sec) return false;
      Vec2 s0 = devp(sec, true);
      Vec2 dir = devp(b, false) - s0;
      if (dir == Vec2{}) return false;
      Q pos(0);
      for (size_t i = sec; i <= b; ++i) {
        Vec2 de = devp(i, true), dx = devp(i, false);
        if (cross(dir, de - s0) != 0 || cross(dir, dx - s0) != 0) return false;
        Q te = dot(dir, de - s0), tx = dot(dir, dx - s0);
        if (te < pos || tx < te) return false;
        pos = tx;
      }
      sec = b + 1;
    }

    std::set<size_t> fcl;
    for (const FocusSpec& fs : a.focus) fcl.insert(topo.class_of.at(fs.at));
    for (const FocusPassage& ps : w.passages) {
      if (!fcl.count(ps.vclass)) return false;
      const WitnessPiece& pp = w.pieces[ps.piece];
      const Chart& c = a.charts[pp.chart];
      bool found = false;
      for (size_t j = 0; j < c.size(); ++j) {
        if (!(c.v[j] == pp.exit)) continue;
        if (topo.class_of.at(Germ{pp.chart, j}) == ps.vclass) found = true;
      }
      if (!found) return false;
    }

    if (!(devp(0, true) == w.dev_start)) return false;
    if (!(devp(w.pieces.size() - 1, false) == w.dev_end)) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

AuditReport audit_convexity(const Atlas& a,
                            const std::vector<std::pair<SurfacePoint, SurfacePoint>>& pairs,
                            long budget, Exec exec, size_t state_cap) {
  AuditReport rep;
  rep.pairs.resize(pairs.size());
  auto run_one = [&](size_t i) {
    PairAudit pa;
    pa.p = pairs[i].first;
    pa.q = pairs[i].second;
    try {
      SegmentSearch s = segment_between(a, pa.p, pa.q, budget, state_cap);
      pa.count = s.witnesses.size();
      pa.budget_limited = s.budget_limited;
      pa.complete = s.complete;
    } catch (const Error&) {
      pa.count = 0;
    }
    rep.pairs[i] = std::move(pa);
  };
  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(pairs.size()); ++i) run_one(size_t(i));
  } else {
    for (size_t i = 0; i < pairs.size(); ++i) run_one(i);
  }
  for (const PairAudit& pa : rep.pairs) {
    if (pa.count == 0) ++rep.failures;
    rep.all_complete = rep.all_complete && pa.complete;
  }
  return rep;
}

std::vector<std::vector<BoundaryCorner>> boundary_local_convexity(const Atlas& a) {
  ValidationReport rep = validate(a);
  if (!rep.pass) throw ValidationFailed("atlas does not validate");
  Topology topo = build_topology(a);
  std::vector<std::vector<BoundaryCorner>> out;
  for (const auto& loop : boundary_loops(a)) {
    std::vector<BoundaryCorner> l;
    for (const BoundaryEdgeInfo& be : loop) {
      BoundaryCorner c;
      c.edge = be.edge;
      c.length = be.length;
      c.vclass = topo.class_of.at(Germ{be.edge.chart, be.edge.edge});
      if (!rep.classes[c.vclass].corner) throw StructuralError("boundary corner without angle");
      c.corner = *rep.classes[c.vclass].corner;
      l.push_back(std::move(c));
    }
    out.push_back(std::move(l));
  }
  return out;
}

namespace {

void explore_branches(const Atlas& a, const Trace& t, long budget, DirectionTrap& o) {
  o.max_bits = std::max(o.max_bits, t.max_bits);
  o.max_crossings = std::max(o.max_crossings, budget - t.budget_left);
  switch (t.events.back().kind) {
    case EventKind::BoundaryHit:
      o.escaped = true;
      ++o.branches;
      return;
    case EventKind::FocusHit:
      break;
    default:
      ++o.branches;
      return;
  }
  if (o.branches + 2 > kBranchCap) {
    o.branch_cap_hit = true;
    ++o.branches;
    return;
  }
  for (Side side : {Side::Left, Side::Right})
    explore_branches(a, extend_through_focus(a, t, side), budget, o);
}

}  // namespace

TrapReport trapped_test(const Atlas& a, const SurfacePoint& start,
                        const std::vector<Vec2>& directions, long budget, Exec exec) {
  TrapReport rep;
  rep.dirs.resize(directions.size());
  auto run_one = [&](size_t i) {
    DirectionTrap o;
    o.dir = directions[i];
    explore_branches(a, trace(a, Ray{start, directions[i]}, budget), budget, o);
    rep.dirs[i] = std::move(o);
  };
  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(directions.size()); ++i) run_one(size_t(i));
  } else {
    for (size_t i = 0; i < directions.size(); ++i) run_one(i);
  }
  for (const DirectionTrap& d : rep.dirs)
    if (d.escaped) ++rep.escapes;
  return rep;
}

bool forward_cycling(const Trace& t, size_t n) {
  for (size_t i = 0; i + 1 < t.steps.size(); ++i) {
    size_t c0 = t.steps[i].chart, c1 = t.steps[i + 1].chart;
    if (c1 != c0 && c1 != (c0 + 1) % n) return false;
  }
  return true;
}

std::vector<SurfacePoint> sample_interior_points(const Atlas& a, const std::vector<size_t>& charts,
                                                 size_t n, uint64_t seed) {
  std::vector<size_t> cs = charts;
  if (cs.empty()) {
    cs.resize(a.charts.size());
    std::iota(cs.begin(), cs.end(), size_t{0});
  }
  if (cs.empty()) throw InvalidArgument("atlas has no charts");
  std::mt19937_64 rng(seed);
  std::vector<SurfacePoint> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    size_t c = cs[i % cs.size()];
    if (c >= a.charts.size()) throw InvalidArgument("chart id out of range");
    const Chart& ch = a.charts[c];
    Vec2 s;
    Q tot(0);
    for (const Vec2& v : ch.v) {
      long w = 1 + long(rng() % 64);
      s = s + v * Q(w);
      tot += w;
    }
    out.push_back({c, {s.x / tot, s.y / tot}});
  }
  return out;
}

}  // namespace af
