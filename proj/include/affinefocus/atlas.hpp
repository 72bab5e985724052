#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affinefocus/affine.hpp"

namespace af {

// Convex polygon chart, vertices counterclockwise. Edge i runs from vertex i
// to vertex i+1 (mod size). Straight vertices (angle exactly pi) are allowed;
// focus points and gluing breaks are always vertices.
struct Chart {
  long id = -1;  // external id for serialization; -1 means "use position"
  std::vector<Vec2> v;

  size_t size() const { return v.size(); }
  const Vec2& vertex(size_t i) const { return v[i % v.size()]; }
  Vec2 edge_vec(size_t e) const { return vertex(e + 1) - vertex(e); }
};

struct EdgeRef {
  size_t chart = 0;
  size_t edge = 0;
  auto operator<=>(const EdgeRef&) const = default;
};

// Identifies src edge with dst edge, reversing orientation: map sends
// src vertex(edge) to dst vertex(edge+1) and src vertex(edge+1) to
// dst vertex(edge). map.lin must have determinant +1.
struct Gluing {
  EdgeRef src, dst;
  AffineT map;
  std::string tag;  // builder annotation, not serialized
};

struct Germ {
  size_t chart = 0;
  size_t vertex = 0;
  auto operator<=>(const Germ&) const = default;
};

struct FocusSpec {
  Germ at;
  long index = 1;
};

struct Atlas {
  std::vector<Chart> charts;
  std::vector<Gluing> gluings;
  std::vector<FocusSpec> focus;
};

// Derived combinatorial structure. Germ (c,i) is the corner of chart c at
// vertex i; its sector spans counterclockwise from the outgoing edge i to
// the reversed incoming edge i-1. Walking counterclockwise around the
// underlying point crosses the incoming edge; clockwise crosses the
// outgoing edge. Classes are the orbits: cycles for interior points,
// chains for boundary points.
struct Topology {
  const Atlas* atlas = nullptr;
  // gluing index and whether the edge is that gluing's src side
  std::map<EdgeRef, std::pair<size_t, bool>> glued;
  std::vector<std::vector<Germ>> classes;  // interior classes listed in cycle order
  std::map<Germ, size_t> class_of;
  std::vector<bool> interior;

  std::optional<std::pair<size_t, bool>> gluing_at(const EdgeRef& e) const {
    auto it = glued.find(e);
    if (it == glued.end()) return std::nullopt;
    return it->second;
  }

  // Step to the adjacent germ around the same point. The returned transform
  // maps the new germ's chart coordinates into the current germ's chart
  // coordinates, so developed frames compose as D_new = D_cur * step.
  std::optional<std::pair<Germ, AffineT>> next_ccw(const Germ& g) const;
  std::optional<std::pair<Germ, AffineT>> next_cw(const Germ& g) const;
};

// Throws StructuralError on out-of-range ids, degenerate edges in gluings,
// an edge glued more than once, or an edge glued to itself.
Topology build_topology(const Atlas& a);

enum class VertexKind { Flat, Focus, Invalid, Boundary };
enum class CornerKind { Convex, Straight, Concave };

struct VertexClassReport {
  size_t id = 0;
  std::vector<Germ> germs;
  bool is_interior = false;
  VertexKind kind = VertexKind::Invalid;
  std::optional<AffineT> holonomy;  // interior classes, base = smallest germ
  long index = 0;                   // focus classes
  std::optional<CornerKind> corner;  // boundary classes
  std::string message;
};

struct GluingCheck {
  size_t index = 0;
  bool endpoints_match = false;
  bool orientation_ok = false;
  std::string message;
};

struct ValidationReport {
  bool pass = false;
  bool connected = false;
  std::vector<std::string> structural;  // polygon and pairing defects
  std::vector<GluingCheck> gluings;
  std::vector<VertexClassReport> classes;
  long total_focus_index = 0;
};

// Full geometric validation. Never throws on bad geometry; only malformed
// indices raise StructuralError.
ValidationReport validate(const Atlas& a);

// Holonomy of an interior vertex class, counterclockwise, based at the
// lexicographically smallest (chart, vertex) germ of the class. Fixes the
// vertex; focus classes give a parabolic matrix of positive index.
AffineT vertex_holonomy(const Atlas& a, size_t class_id);

// Sum of focus indices over all focus classes; requires a passing atlas.
long total_focus_index(const Atlas& a);

// Exact direction-arc predicates shared by validation and tracing. An arc
// step (u, v) is counterclockwise of size in (0, pi]; r is tested against
// the half-open arc (u, v].
bool arc_step_valid(const Vec2& u, const Vec2& v);
bool arc_contains(const Vec2& u, const Vec2& v, const Vec2& r);

// Strictly inside the open sector from u counterclockwise to w (size <= pi).
bool sector_contains_strict(const Vec2& u, const Vec2& w, const Vec2& d);

// Developed total angle of a fan of rays r_0..r_m (consecutive steps valid
// arcs) compared against pi: Convex < pi, Straight = pi, Concave > pi.
CornerKind fan_angle_class(const std::vector<Vec2>& rays);

// Number of half-open arc steps (r_i, r_i+1] containing r_0: the winding
// count when the fan closes up on r_0.
int fan_winding(const std::vector<Vec2>& rays);

// Point inside or on the boundary of the (convex, CCW) chart polygon.
bool chart_contains(const Chart& c, const Vec2& p);

struct BoundaryEdgeInfo {
  EdgeRef edge;
  Q length{0};                    // integral affine length
  std::optional<Q> char_inside;   // characteristic number at the edge's
                                  // start corner, surface on the left
  std::optional<Q> char_outside;  // same corner read with the surface on
                                  // the right; set only at simple corners
};

// Boundary circles, each walked counterclockwise (surface on the left),
// with neighbor edges developed into each edge's chart for the corner
// invariants. Deterministic: every loop starts at its smallest edge ref.
std::vector<std::vector<BoundaryEdgeInfo>> boundary_loops(const Atlas& a);

}  // namespace af
