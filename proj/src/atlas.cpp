#include "affinefocus/atlas.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "affinefocus/errors.hpp"

namespace af {

bool arc_step_valid(const Vec2& u, const Vec2& v) {
  if (u.is_zero() || v.is_zero()) return false;
  Q cr = cross(u, v);
  if (cr > 0) return true;
  return cr == 0 && dot(u, v) < 0;  // exactly pi
}

bool arc_contains(const Vec2& u, const Vec2& v, const Vec2& r) {
  if (same_ray(r, v)) return true;  // closed at v
  if (cross(u, v) == 0) return cross(u, r) > 0;  // pi-wide: strict left of u
  return cross(u, r) > 0 && cross(r, v) > 0;
}

bool sector_contains_strict(const Vec2& u, const Vec2& w, const Vec2& d) {
  return cross(u, d) > 0 && cross(d, w) > 0;
}

CornerKind fan_angle_class(const std::vector<Vec2>& rays) {
  Vec2 opposite = -rays.front();
  for (size_t i = 0; i + 1 < rays.size(); ++i) {
    if (arc_contains(rays[i], rays[i + 1], opposite)) {
      bool lands_at_end = i + 2 == rays.size() && same_ray(rays[i + 1], opposite);
      return lands_at_end ? CornerKind::Straight : CornerKind::Concave;
    }
  }
  return CornerKind::Convex;
}

int fan_winding(const std::vector<Vec2>& rays) {
  int count = 0;
  for (size_t i = 0; i + 1 < rays.size(); ++i)
    if (arc_contains(rays[i], rays[i + 1], rays.front())) ++count;
  return count;
}

std::optional<std::pair<Germ, AffineT>> Topology::next_ccw(const Germ& g) const {
  size_t n = atlas->charts[g.chart].size();
  EdgeRef arriving{g.chart, (g.vertex + n - 1) % n};
  auto hit = gluing_at(arriving);
  if (!hit) return std::nullopt;
  const Gluing& gl = atlas->gluings[hit->first];
  if (hit->second)  // arriving edge is the src side
    return {{Germ{gl.dst.chart, gl.dst.edge}, gl.map.inverse()}};
  return {{Germ{gl.src.chart, gl.src.edge}, gl.map}};
}

std::optional<std::pair<Germ, AffineT>> Topology::next_cw(const Germ& g) const {
  EdgeRef leaving{g.chart, g.vertex};
  auto hit = gluing_at(leaving);
  if (!hit) return std::nullopt;
  const Gluing& gl = atlas->gluings[hit->first];
  if (hit->second) {
    size_t n = atlas->charts[gl.dst.chart].size();
    return {{Germ{gl.dst.chart, (gl.dst.edge + 1) % n}, gl.map.inverse()}};
  }
  size_t n = atlas->charts[gl.src.chart].size();
  return {{Germ{gl.src.chart, (gl.src.edge + 1) % n}, gl.map}};
}

static Topology build_topology_impl(const Atlas& a, std::vector<std::string>* defects) {
  Topology t;
  t.atlas = &a;
  for (size_t gi = 0; gi < a.gluings.size(); ++gi) {
    const Gluing& g = a.gluings[gi];
    for (const EdgeRef* e : {&g.src, &g.dst}) {
      if (e->chart >= a.charts.size() || a.charts[e->chart].size() < 3 ||
          e->edge >= a.charts[e->chart].size())
        throw StructuralError("gluing " + std::to_string(gi) + " references a bad edge");
    }
    if (g.src == g.dst) {
      if (!defects) throw StructuralError("edge glued to itself");
      defects->push_back("gluing " + std::to_string(gi) + " identifies an edge with itself");
      continue;
    }
    bool clash = false;
    for (const auto& [e, side] : {std::pair{g.src, true}, std::pair{g.dst, false}}) {
      if (t.glued.count(e)) {
        if (!defects) throw StructuralError("edge glued more than once");
        defects->push_back("edge (" + std::to_string(e.chart) + "," + std::to_string(e.edge) +
                           ") glued more than once");
        clash = true;
      }
    }
    if (clash) continue;
    t.glued[g.src] = {gi, true};
    t.glued[g.dst] = {gi, false};
  }

  std::set<Germ> seen;
  for (size_t c = 0; c < a.charts.size(); ++c) {
    for (size_t v = 0; v < a.charts[c].size(); ++v) {
      Germ g0{c, v};
      if (seen.count(g0)) continue;
      // Rewind clockwise to a chain start, or detect a cycle.
      Germ start = g0;
      bool cycle = false;
      for (size_t guard = 0;; ++guard) {
        auto prev = t.next_cw(start);
        if (!prev) break;
        start = prev->first;
        if (start == g0) {
          cycle = true;
          break;
        }
        if (guard > a.gluings.size() * 2 + a.charts.size() * 8)
          throw StructuralError("vertex walk does not terminate");
      }
      std::vector<Germ> cls;
      Germ cur = cycle ? g0 : start;
      while (true) {
        cls.push_back(cur);
        seen.insert(cur);
        auto nxt = t.next_ccw(cur);
        if (!nxt) break;
        cur = nxt->first;
        if (cycle && cur == g0) break;
      }
      if (cycle) {
        // Rotate so the cycle starts at its smallest germ.
        auto mn = std::min_element(cls.begin(), cls.end());
        std::rotate(cls.begin(), mn, cls.end());
      }
      size_t id = t.classes.size();
      for (const Germ& g : cls) t.class_of[g] = id;
      t.interior.push_back(cycle);
      t.classes.push_back(std::move(cls));
    }
  }
  return t;
}

Topology build_topology(const Atlas& a) { return build_topology_impl(a, nullptr); }

static void polygon_defects(const Chart& ch, size_t ci, std::vector<std::string>& out) {
  std::string tag = "chart " + std::to_string(ci);
  if (ch.size() < 3) {
    out.push_back(tag + ": fewer than 3 vertices");
    return;
  }
  size_t n = ch.size();
  std::vector<Vec2> dirs;
  for (size_t i = 0; i < n; ++i) {
    Vec2 e = ch.edge_vec(i);
    if (e.is_zero()) {
      out.push_back(tag + ": zero-length edge " + std::to_string(i));
      return;
    }
    dirs.push_back(e);
  }
  dirs.push_back(dirs.front());
  // Edge directions may only turn left by less than pi, or not at all
  // (straight vertex). An exact-pi turn doubles the boundary back.
  for (size_t i = 0; i < n; ++i) {
    if (!(cross(dirs[i], dirs[i + 1]) > 0) && !same_ray(dirs[i], dirs[i + 1])) {
      out.push_back(tag + ": not counterclockwise-convex at vertex " + std::to_string(i + 1));
      return;
    }
  }
  // Straight vertices contribute no turn; drop them for the winding count.
  std::vector<Vec2> turning;
  for (size_t i = 0; i <= n; ++i)
    if (turning.empty() || !same_ray(turning.back(), dirs[i])) turning.push_back(dirs[i]);
  if (fan_winding(turning) != 1) out.push_back(tag + ": boundary winds more than once");
}

// Rays of the developed corner fan: start with the outgoing edge of the
// first germ, then the developed reversed incoming edge of every germ.
// For cycles the last ray is the holonomy image of the first.
static std::vector<Vec2> corner_fan(const Topology& t, const std::vector<Germ>& cls,
                                    bool cycle, AffineT* holonomy_out) {
  const Atlas& a = *t.atlas;
  std::vector<Vec2> rays;
  AffineT dev = AffineT::identity();
  const Chart& ch0 = a.charts[cls.front().chart];
  rays.push_back(ch0.edge_vec(cls.front().vertex));
  for (size_t i = 0; i < cls.size(); ++i) {
    const Germ& g = cls[i];
    const Chart& ch = a.charts[g.chart];
    size_t n = ch.size();
    rays.push_back(dev.apply_dir(-ch.edge_vec((g.vertex + n - 1) % n)));
    if (i + 1 < cls.size() || cycle) {
      auto nxt = t.next_ccw(g);
      dev = dev.compose(nxt->second);
    }
  }
  if (holonomy_out) *holonomy_out = dev;
  return rays;
}

ValidationReport validate(const Atlas& a) {
  ValidationReport rep;
  if (a.charts.empty()) {
    rep.structural.push_back("atlas has no charts");
    return rep;
  }
  for (size_t c = 0; c < a.charts.size(); ++c) polygon_defects(a.charts[c], c, rep.structural);

  Topology t = build_topology_impl(a, &rep.structural);

  for (size_t gi = 0; gi < a.gluings.size(); ++gi) {
    const Gluing& g = a.gluings[gi];
    GluingCheck gc;
    gc.index = gi;
    const Chart& sc = a.charts[g.src.chart];
    const Chart& dc = a.charts[g.dst.chart];
    gc.endpoints_match = g.map.apply(sc.vertex(g.src.edge)) == dc.vertex(g.dst.edge + 1) &&
                         g.map.apply(sc.vertex(g.src.edge + 1)) == dc.vertex(g.dst.edge);
    gc.orientation_ok = g.map.lin.det() == 1;
    if (!gc.endpoints_match) gc.message = "EndpointMismatch";
    else if (!gc.orientation_ok) gc.message = "orientation-reversing linear part";
    rep.gluings.push_back(gc);
  }

  // Connectivity over gluings.
  std::vector<size_t> root(a.charts.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const Gluing& g : a.gluings) root[find(g.src.chart)] = find(g.dst.chart);
  rep.connected = true;
  for (size_t c = 0; c < a.charts.size(); ++c)
    if (find(c) != find(0)) rep.connected = false;

  // Declared focus classes.
  std::map<size_t, long> declared;
  for (const FocusSpec& f : a.focus) {
    if (f.at.chart >= a.charts.size() || f.at.vertex >= a.charts[f.at.chart].size())
      throw StructuralError("focus spec references a bad vertex");
    size_t cls = t.class_of.at(f.at);
    if (declared.count(cls)) {
      rep.structural.push_back("vertex class " + std::to_string(cls) + " declared focus twice");
      continue;
    }
    declared[cls] = f.index;
  }

  bool classes_ok = true;
  for (size_t ci = 0; ci < t.classes.size(); ++ci) {
    VertexClassReport vc;
    vc.id = ci;
    vc.germs = t.classes[ci];
    vc.is_interior = t.interior[ci];
    auto decl = declared.find(ci);
    auto fan_ok = [](const std::vector<Vec2>& rays) {
      for (size_t i = 0; i + 1 < rays.size(); ++i)
        if (!arc_step_valid(rays[i], rays[i + 1])) return false;
      return true;
    };
    if (!vc.is_interior) {
      vc.kind = VertexKind::Boundary;
      std::vector<Vec2> rays = corner_fan(t, t.classes[ci], false, nullptr);
      if (!fan_ok(rays)) {
        vc.kind = VertexKind::Invalid;
        vc.message = "degenerate corner fan";
      } else {
        vc.corner = fan_angle_class(rays);
      }
      if (decl != declared.end()) {
        vc.kind = VertexKind::Invalid;
        vc.message = "boundary class declared as focus";
      }
    } else {
      AffineT hol;
      std::vector<Vec2> rays = corner_fan(t, t.classes[ci], true, &hol);
      vc.holonomy = hol;
      const Chart& ch0 = a.charts[t.classes[ci].front().chart];
      bool fixes = hol.apply(ch0.vertex(t.classes[ci].front().vertex)) ==
                   ch0.vertex(t.classes[ci].front().vertex);
      if (!fan_ok(rays)) {
        vc.kind = VertexKind::Invalid;
        vc.message = "degenerate corner fan";
      } else if (decl == declared.end()) {
        if (hol.lin.is_identity() && hol.tr.is_zero() && fan_winding(rays) == 1) {
          vc.kind = VertexKind::Flat;
        } else {
          vc.kind = VertexKind::Invalid;
          vc.message = hol.lin.is_identity() && hol.tr.is_zero()
                           ? "flat holonomy but developed angle is not 2*pi"
                           : "undeclared nontrivial holonomy";
        }
      } else {
        long k = decl->second;
        bool parabolic = fixes && hol.lin.det() == 1 && hol.lin.trace() == 2 &&
                         !hol.lin.is_identity();
        if (k >= 1 && parabolic && focus_index(hol.lin) == k) {
          vc.kind = VertexKind::Focus;
          vc.index = k;
        } else {
          vc.kind = VertexKind::Invalid;
          vc.message = !parabolic ? "declared focus class has non-parabolic holonomy"
                                  : "declared index does not match holonomy";
        }
      }
    }
    classes_ok = classes_ok && vc.kind != VertexKind::Invalid;
    if (vc.kind == VertexKind::Focus) rep.total_focus_index += vc.index;
    rep.classes.push_back(std::move(vc));
  }

  bool gluings_ok = true;
  for (const auto& gc : rep.gluings)
    gluings_ok = gluings_ok && gc.endpoints_match && gc.orientation_ok;
  rep.pass = rep.structural.empty() && gluings_ok && rep.connected && classes_ok;
  return rep;
}

AffineT vertex_holonomy(const Atlas& a, size_t class_id) {
  Topology t = build_topology(a);
  if (class_id >= t.classes.size()) throw StructuralError("no such vertex class");
  if (!t.interior[class_id]) throw BoundaryVertex();
  AffineT hol;
  corner_fan(t, t.classes[class_id], true, &hol);
  return hol;
}

long total_focus_index(const Atlas& a) {
  ValidationReport rep = validate(a);
  if (!rep.pass) throw StructuralError("atlas fails validation");
  return rep.total_focus_index;
}

bool chart_contains(const Chart& c, const Vec2& p) {
  for (size_t i = 0; i < c.size(); ++i)
    if (cross(c.edge_vec(i), p - c.vertex(i)) < 0) return false;
  return true;
}

std::vector<std::vector<BoundaryEdgeInfo>> boundary_loops(const Atlas& a) {
  Topology t = build_topology(a);
  // For a boundary edge, the chain of its head vertex ends at the head germ
  // and starts at the germ whose outgoing edge is the next boundary edge;
  // the composed ccw steps transport that next chart into this one.
  auto chain_at = [&](const Germ& head) {
    const std::vector<Germ>& cls = t.classes[t.class_of.at(head)];
    if (cls.back() != head) throw StructuralError("boundary walk hit an interior vertex");
    AffineT dev = AffineT::identity();  // maps cls.back() coords to cls.front() coords
    Germ g = cls.front();
    for (size_t i = 0; i + 1 < cls.size(); ++i) {
      auto nxt = t.next_ccw(g);
      if (!nxt) throw StructuralError("vertex chain shorter than its class");
      dev = dev.compose(nxt->second);
      g = nxt->first;
    }
    return std::pair{cls.front(), dev};
  };

  std::set<EdgeRef> todo;
  for (size_t c = 0; c < a.charts.size(); ++c)
    for (size_t e = 0; e < a.charts[c].size(); ++e)
      if (!t.gluing_at({c, e})) todo.insert({c, e});

  std::vector<std::vector<BoundaryEdgeInfo>> loops;
  while (!todo.empty()) {
    std::vector<EdgeRef> loop;
    EdgeRef cur = *todo.begin();
    while (todo.erase(cur)) {
      loop.push_back(cur);
      const Chart& ch = a.charts[cur.chart];
      auto [nxt, dev] = chain_at({cur.chart, (cur.edge + 1) % ch.size()});
      cur = {nxt.chart, nxt.vertex};
    }
    std::vector<BoundaryEdgeInfo> infos;
    for (size_t i = 0; i < loop.size(); ++i) {
      const EdgeRef& e = loop[i];
      const Chart& ch = a.charts[e.chart];
      Vec2 p0 = ch.vertex(e.edge);
      Vec2 p1 = ch.vertex(e.edge + 1);
      auto [nghost, dev_next] = chain_at({e.chart, (e.edge + 1) % ch.size()});
      const Chart& nch = a.charts[nghost.chart];
      Vec2 p2 = dev_next.inverse().apply(nch.vertex(nghost.vertex + 1));
      const EdgeRef& pe = loop[(i + loop.size() - 1) % loop.size()];
      const Chart& pch = a.charts[pe.chart];
      auto [self, dev_prev] = chain_at({pe.chart, (pe.edge + 1) % pch.size()});
      if (self.chart != e.chart || self.vertex != e.edge)
        throw StructuralError("boundary loop is not closed");
      Vec2 p_prev = dev_prev.apply(pch.vertex(pe.edge));
      BoundaryEdgeInfo info;
      info.edge = e;
      info.length = integral_length(p0, p1);
      try {
        info.char_inside = characteristic_number(p_prev, p0, p1, p2);
      } catch (const DegenerateCorner&) {
      }
      try {
        info.char_outside = characteristic_number(p2, p1, p0, p_prev);
      } catch (const DegenerateCorner&) {
      }
      infos.push_back(std::move(info));
    }
    loops.push_back(std::move(infos));
  }
  return loops;
}

}  // namespace af
