#pragma once

#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "affinefocus/exec.hpp"
#include "affinefocus/rational.hpp"

namespace af {

// Affine functional on the coordinate vector: coeffs . x + c.
struct AffineFunc {
  std::vector<Q> coeffs;
  Q c{0};

  Q eval(const std::vector<Q>& x) const;

  static AffineFunc coordinate(size_t j, size_t n) {
    AffineFunc f;
    f.coeffs.assign(n, Q(0));
    f.coeffs[j] = 1;
    return f;
  }
};

// Piecewise-linear critical-value profile. The argument is an affine
// functional of the coordinates; pts are (arg, value) breakpoints with
// strictly increasing args. One breakpoint means a constant profile;
// otherwise the end segments extend linearly.
struct CritProfile {
  AffineFunc arg;
  std::vector<std::pair<Q, Q>> pts;

  Q eval_at(const Q& x) const;
  Q eval(const std::vector<Q>& coords) const { return eval_at(arg.eval(coords)); }

  static CritProfile constant(const Q& value, size_t n) {
    CritProfile p;
    p.arg.coeffs.assign(n, Q(0));
    p.pts = {{Q(0), value}};
    return p;
  }
};

// A monodromy wall: the zero locus of a single-valued affine functional,
// carrying one multi-valued coordinate G (index g) with branch relation
// G_r = G_l + k * functional where functional > 0, G_r = G_l elsewhere.
struct Wall {
  AffineFunc functional;
  Q k{1};
  size_t g = 0;
  CritProfile crit;
};

// Multi-valued coordinate box. Coordinate vector stores single-valued
// coordinates verbatim and each G in its l-branch value.
struct WallModel {
  std::vector<std::string> names;
  std::vector<std::pair<Q, Q>> bounds;  // closed intervals
  std::vector<Wall> walls;

  size_t dim() const { return names.size(); }
  bool is_multi_valued(size_t j) const;

  // Structural checks: bounds ordered, wall functionals built only from
  // single-valued coordinates, each G paired with exactly one wall,
  // k != 0, crit breakpoints strictly increasing. Throws StructuralError.
  void validate() const;
};

struct BoxPoint {
  std::vector<Q> c;
  bool operator==(const BoxPoint& o) const { return c == o.c; }
};

// In-bounds check including both branch values of every G. Throws
// OutOfBounds with a description when verbose errors are wanted.
bool in_bounds(const WallModel& m, const BoxPoint& p);
void require_in_bounds(const WallModel& m, const BoxPoint& p);

enum class Branch { L, R };

struct WallCheck {
  size_t wall;
  Branch branch;
  Q t;       // crossing parameter in (0,1)
  Q margin;  // interpolated G at t minus the critical value there
  bool valid;
};

// One branch vector over the strictly crossed walls. The segment is
// straight iff every crossing check is valid.
struct Candidate {
  std::vector<size_t> crossed;  // wall indices, increasing
  std::vector<Branch> branch;   // parallel to crossed
  std::vector<WallCheck> checks;
  bool straight = false;

  // Coordinate vector (l-branch normal form) along this candidate.
  std::vector<Q> coords_at(const WallModel& m, const BoxPoint& a, const BoxPoint& b,
                           const Q& t) const;
};

struct SegmentWitness {
  Candidate cand;
  // Samples at t = 0, each crossing parameter, and t = 1.
  std::vector<std::pair<Q, std::vector<Q>>> path;
};

struct SegmentDecision {
  long count = 0;
  std::vector<SegmentWitness> witnesses;
};

// Enumerates the 2^(crossed walls) branch vectors with their verdicts.
// A wall is crossed iff its functional has strictly opposite signs at the
// endpoints; walls touched only at an endpoint (functional zero there)
// impose no constraint and both interpolations coincide.
std::vector<Candidate> candidate_segments(const WallModel& m, const BoxPoint& a,
                                          const BoxPoint& b);

SegmentDecision segment_exists(const WallModel& m, const BoxPoint& a, const BoxPoint& b);

// Re-derives every wall-side condition of a witness from its coordinate
// path alone; used as a self-check on scan output.
bool certify_witness(const WallModel& m, const BoxPoint& a, const BoxPoint& b,
                     const SegmentWitness& w);

// All valid grid points with `per_axis` equally spaced values per coordinate.
std::vector<BoxPoint> grid_points(const WallModel& m, size_t per_axis);

struct ScanReport {
  size_t points = 0;
  size_t pairs = 0;
  long min_count = 0;
  long max_count = 0;
  size_t zero_pair_count = 0;
  std::vector<std::pair<BoxPoint, BoxPoint>> zero_pairs;  // capped sample
};

constexpr size_t kZeroPairCap = 64;

// Unordered pairs over the grid; identical results for both policies.
ScanReport convexity_scan(const WallModel& m, size_t per_axis, Exec exec = Exec::Serial);

// 2-D focus box: coordinates (F, G), one wall {F = 0} of index k,
// critical value crit (constant profile).
WallModel focus_box_model(const Q& k, const Q& delta, const Q& delta_p, const Q& crit = Q(0));

// The focus^2 counterexample: 4-D box, two index-1 walls whose critical
// profiles cut across each other so that all four branch vectors break
// for the returned pair.
std::tuple<WallModel, BoxPoint, BoxPoint> nonconvex_focus2_model();

// 3-D box with two parallel walls {F = 0} and {F = 1/2} carrying opposing
// critical profiles; the returned pair has no straight segment. The pair is
// found by scanning a fixed coarse grid; SearchFailed if the scan finds
// nothing (does not happen for the shipped profiles).
std::tuple<WallModel, BoxPoint, BoxPoint> dim3_two_curve_model();

}  // namespace af
