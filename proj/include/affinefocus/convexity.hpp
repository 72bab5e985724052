#pragma once

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "affinefocus/atlas.hpp"
#include "affinefocus/exec.hpp"
#include "affinefocus/tracer.hpp"

namespace af {

// One chart-interior sub-segment of a straight path. to_start maps this
// chart's coordinates into the frame of the path's first piece, so the
// developed image of the whole path is recovered by applying each piece's
// transform to its endpoints.
struct WitnessPiece {
  size_t chart = 0;
  Vec2 entry, exit;  // chart coordinates
  AffineT to_start = AffineT::identity();
};

// A straight passage through a focus vertex: the exit point of pieces[piece]
// is the vertex, the path bends there by the vertex monodromy, and `side`
// records which way the star was unrolled.
struct FocusPassage {
  size_t piece = 0;
  size_t vclass = 0;
  Side side = Side::Left;
};

// A straight segment between two surface points, as the ordered list of
// chart sub-segments it traverses. Developed endpoints are in the frame of
// the first piece.
struct CorridorWitness {
  std::vector<WitnessPiece> pieces;
  std::vector<FocusPassage> passages;
  Vec2 dev_start, dev_end;
  long crossings = 0;  // gluing crossings plus vertex passages consumed
};

struct SegmentSearch {
  std::vector<CorridorWitness> witnesses;
  // Some corridor or branch was cut off by the crossing budget; segments
  // needing more crossings may exist.
  bool budget_limited = false;
  // False when the state cap stopped corridor enumeration early.
  bool complete = true;
  size_t states = 0;  // corridor states expanded
};

// Enumerates every straight segment from p to q whose crossing count
// (gluing crossings plus vertex passages, including focus passages) stays
// within budget. Corridors of charts reachable from each chart copy of p
// are explored as an exact direction-cone funnel; candidate segments are
// re-verified by rational crossing parameters before being reported, and
// paths meeting a focus vertex transversally branch left and right through
// the unrolled vertex star. Distinct witnesses are kept up to canonical
// path equality. Throws InvalidPoint if an endpoint is not on its chart and
// DegeneratePair if the endpoints are the same surface point. A point lying
// on a glued edge or vertex is searched from all charts containing it.
SegmentSearch segment_between(const Atlas& a, const SurfacePoint& p, const SurfacePoint& q,
                              long budget, size_t state_cap = 50000);

// Re-derives a witness from scratch: pieces lie in their charts (exact
// half-plane containment), consecutive pieces meet in the same surface
// point with the correct gluing transform, the developed image is straight
// and monotone between focus passages, passages bend exactly at declared
// focus vertices, and the endpoints are copies of p and q.
bool witness_valid(const Atlas& a, const SurfacePoint& p, const SurfacePoint& q,
                   const CorridorWitness& w);

// Chart-coordinate normal form of the path: pieces are split at chart
// vertices lying in their interior, zero-length pieces are dropped, and a
// sub-segment riding a glued edge is rewritten to the lexicographically
// smallest of its representations on either side (in either orientation).
// Two witnesses trace the same surface segment iff their canonical paths
// are equal; the reversed segment gives the reversed list.
std::vector<std::tuple<size_t, Vec2, Vec2>> canonical_path(const Atlas& a,
                                                           const CorridorWitness& w);

struct PairAudit {
  SurfacePoint p, q;
  size_t count = 0;  // distinct witnesses within budget
  bool budget_limited = false;
  bool complete = true;
};

struct AuditReport {
  std::vector<PairAudit> pairs;
  size_t failures = 0;  // pairs with no witness within budget
  bool all_complete = true;
};

// Runs segment_between on every pair and flags the pairs with no witness.
// Pairs that cannot be searched (identical endpoints, off-chart points)
// count as failures with zero witnesses.
AuditReport audit_convexity(const Atlas& a,
                            const std::vector<std::pair<SurfacePoint, SurfacePoint>>& pairs,
                            long budget, Exec exec = Exec::Serial, size_t state_cap = 50000);

// One boundary edge together with the corner at its start, in loop order.
struct BoundaryCorner {
  EdgeRef edge;
  Q length;            // integral affine length of the edge
  size_t vclass = 0;   // vertex class at the edge's start corner
  CornerKind corner = CornerKind::Convex;
};

// Classifies every boundary corner by its developed interior angle and
// reports the edges loop by loop; empty for closed atlases. Throws
// ValidationFailed if the atlas does not validate.
std::vector<std::vector<BoundaryCorner>> boundary_local_convexity(const Atlas& a);

struct DirectionTrap {
  Vec2 dir;
  size_t branches = 0;       // branch leaves explored
  bool escaped = false;      // some branch reached the boundary
  long max_crossings = 0;    // most crossings consumed on a single branch
  size_t max_bits = 0;       // largest coordinate seen on any branch
  bool branch_cap_hit = false;
};

struct TrapReport {
  std::vector<DirectionTrap> dirs;
  size_t escapes = 0;  // directions with at least one escaping branch
};

// Traces a ray per direction, exploring both branches of every transversal
// focus hit, and reports whether any branch reached the boundary. Budget
// accounting matches trace(): focus passages themselves are free.
TrapReport trapped_test(const Atlas& a, const SurfacePoint& start,
                        const std::vector<Vec2>& directions, long budget,
                        Exec exec = Exec::Serial);

// True when consecutive trace steps only ever stay in place or advance one
// chart forward around a cycle of n charts (chart -> chart + 1 mod n).
// Replays the trap induction on ring-shaped atlases: a trapped ray must
// cross into the next sector at every step and can never double back.
bool forward_cycling(const Trace& t, size_t n);

// Deterministic interior points for audits: charts are taken round-robin
// from `charts` (all charts when empty) and each point is a convex
// combination of the chart's vertices with pseudo-random positive weights
// drawn from a fixed-seed generator.
std::vector<SurfacePoint> sample_interior_points(const Atlas& a, const std::vector<size_t>& charts,
                                                 size_t n, uint64_t seed);

}  // namespace af
