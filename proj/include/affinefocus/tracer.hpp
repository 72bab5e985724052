#pragma once

#include <vector>

#include "affinefocus/atlas.hpp"

namespace af {

struct SurfacePoint {
  size_t chart = 0;
  Vec2 pos;
  bool operator==(const SurfacePoint&) const = default;
};

struct Ray {
  SurfacePoint start;
  Vec2 dir;
};

enum class EventKind { EdgeCross, FocusHit, FlatVertexPass, BoundaryHit, StepLimit };
enum class Side { Left, Right };

struct TraceEvent {
  EventKind kind;
  size_t gluing = 0;  // EdgeCross
  size_t vclass = 0;  // FocusHit, FlatVertexPass
  EdgeRef edge;       // BoundaryHit
};

// One maximal straight run inside a single chart. from_prev maps this step's
// chart coordinates into the previous step's chart coordinates, so composing
// them left to right develops the whole trace into the first step's frame.
struct TraceStep {
  size_t chart = 0;
  Vec2 entry, exit;
  AffineT from_prev = AffineT::identity();
};

struct Trace {
  std::vector<TraceStep> steps;
  std::vector<TraceEvent> events;
  std::vector<Side> branch_choices;
  SurfacePoint end;     // last point reached
  Vec2 end_dir;         // direction there, in end.chart coordinates
  Germ hit_germ;        // arriving germ of a terminal FocusHit
  long budget_left = 0; // crossings remaining
  size_t max_bits = 0;  // largest numerator/denominator seen, in bits

  const TraceEvent& last_event() const { return events.back(); }
};

// Extends the ray maximally. Crossing a glued edge or passing a vertex
// consumes one unit of budget; the trace stops with StepLimit once the
// budget is spent, with BoundaryHit on an unglued edge or any boundary
// vertex, and with FocusHit at a focus vertex reached transversally to the
// monodromy eigendirection. Along the eigendirection the continuation is
// unique and tracing just keeps going (recorded as FlatVertexPass).
//
// A start point lying on a vertex is re-homed to the germ of its vertex
// class whose sector contains dir; rays along an edge slide inside the
// chart currently owning them.
Trace trace(const Atlas& a, const Ray& r, long budget);

// Branched continuation of a trace ending in FocusHit. The star of germs
// around the focus is developed from the arriving germ counterclockwise
// (Left) or clockwise (Right) until the outgoing direction falls inside a
// sector; tracing then resumes there with the remaining budget. The two
// outgoing germs differ by the vertex monodromy.
Trace extend_through_focus(const Atlas& a, const Trace& t, Side side);

struct Developed {
  std::vector<Vec2> polyline;                // step endpoints, deduplicated
  std::vector<std::vector<Vec2>> corridor;   // developed chart polygon per step
};

// Lays the chart sequence out in the plane of the first step by composing
// the recorded step links. Branch-free traces develop to collinear points.
Developed develop(const Atlas& a, const Trace& t);

}  // namespace af
