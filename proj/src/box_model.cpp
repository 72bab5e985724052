#include "affinefocus/box_model.hpp"

#include <algorithm>
#include <map>

#include "affinefocus/errors.hpp"

namespace af {

Q AffineFunc::eval(const std::vector<Q>& x) const {
  if (coeffs.size() != x.size()) throw InvalidArgument("functional arity mismatch");
  Q v = c;
  for (size_t j = 0; j < x.size(); ++j)
    if (coeffs[j] != 0) v += coeffs[j] * x[j];
  return v;
}

Q CritProfile::eval_at(const Q& x) const {
  if (pts.empty()) throw InvalidArgument("empty critical profile");
  if (pts.size() == 1) return pts[0].second;
  size_t hi = 1;
  while (hi + 1 < pts.size() && pts[hi].first < x) ++hi;
  // Segment [hi-1, hi] covers x, or extends linearly past the ends.
  const auto& [x0, y0] = pts[hi - 1];
  const auto& [x1, y1] = pts[hi];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

bool WallModel::is_multi_valued(size_t j) const {
  for (const auto& w : walls)
    if (w.g == j) return true;
  return false;
}

void WallModel::validate() const {
  size_t n = dim();
  if (bounds.size() != n) throw StructuralError("bounds/names size mismatch");
  for (size_t j = 0; j < n; ++j)
    if (bounds[j].first > bounds[j].second) throw StructuralError("empty bound interval");
  std::vector<int> paired(n, 0);
  for (const auto& w : walls) {
    if (w.g >= n) throw StructuralError("wall G index out of range");
    paired[w.g]++;
    if (w.k == 0) throw StructuralError("wall index k must be nonzero");
    if (w.functional.coeffs.size() != n || w.crit.arg.coeffs.size() != n)
      throw StructuralError("functional arity mismatch");
    if (w.crit.pts.empty()) throw StructuralError("empty critical profile");
    for (size_t i = 1; i < w.crit.pts.size(); ++i)
      if (!(w.crit.pts[i - 1].first < w.crit.pts[i].first))
        throw StructuralError("crit breakpoints not increasing");
  }
  for (const auto& w : walls)
    for (size_t j = 0; j < n; ++j)
      if (w.functional.coeffs[j] != 0 && paired[j] > 0)
        throw StructuralError("wall functional uses a multi-valued coordinate");
  for (size_t j = 0; j < n; ++j)
    if (paired[j] > 1) throw StructuralError("G coordinate paired with several walls");
}

// Branch value of wall w's G coordinate at a box point.
static Q branch_value(const WallModel& m, const Wall& w, const BoxPoint& p, Branch d) {
  Q f = w.functional.eval(p.c);
  Q g = p.c[w.g];
  if (d == Branch::R && f > 0) g += w.k * f;
  return g;
}

bool in_bounds(const WallModel& m, const BoxPoint& p) {
  if (p.c.size() != m.dim()) return false;
  for (size_t j = 0; j < m.dim(); ++j)
    if (p.c[j] < m.bounds[j].first || p.c[j] > m.bounds[j].second) return false;
  for (const auto& w : m.walls) {
    Q r = branch_value(m, w, p, Branch::R);
    if (r < m.bounds[w.g].first || r > m.bounds[w.g].second) return false;
  }
  return true;
}

void require_in_bounds(const WallModel& m, const BoxPoint& p) {
  if (p.c.size() != m.dim()) throw OutOfBounds("coordinate count mismatch");
  if (!in_bounds(m, p)) throw OutOfBounds();
}

std::vector<Q> Candidate::coords_at(const WallModel& m, const BoxPoint& a, const BoxPoint& b,
                                    const Q& t) const {
  std::vector<Branch> d(m.walls.size(), Branch::L);
  for (size_t i = 0; i < crossed.size(); ++i) d[crossed[i]] = branch[i];
  std::vector<Q> out(m.dim());
  for (size_t j = 0; j < m.dim(); ++j) out[j] = (1 - t) * a.c[j] + t * b.c[j];
  for (size_t wi = 0; wi < m.walls.size(); ++wi) {
    const Wall& w = m.walls[wi];
    Q ga = branch_value(m, w, a, d[wi]);
    Q gb = branch_value(m, w, b, d[wi]);
    Q g = (1 - t) * ga + t * gb;  // straight in the chosen branch chart
    if (d[wi] == Branch::R) {
      Q f = w.functional.eval(out);  // functionals use single-valued coords only
      if (f > 0) g -= w.k * f;       // back to the l-branch normal form
    }
    out[w.g] = g;
  }
  return out;
}

std::vector<Candidate> candidate_segments(const WallModel& m, const BoxPoint& a,
                                          const BoxPoint& b) {
  require_in_bounds(m, a);
  require_in_bounds(m, b);
  if (a == b) throw DegeneratePair();

  std::vector<size_t> crossed;
  std::vector<Q> ta;
  for (size_t wi = 0; wi < m.walls.size(); ++wi) {
    Q fa = m.walls[wi].functional.eval(a.c);
    Q fb = m.walls[wi].functional.eval(b.c);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      crossed.push_back(wi);
      ta.push_back(-fa / (fb - fa));
    }
  }

  std::vector<Candidate> out;
  size_t count = size_t(1) << crossed.size();
  for (size_t mask = 0; mask < count; ++mask) {
    Candidate cand;
    cand.crossed = crossed;
    cand.branch.resize(crossed.size());
    for (size_t i = 0; i < crossed.size(); ++i)
      cand.branch[i] = (mask >> i) & 1 ? Branch::R : Branch::L;
    cand.straight = true;
    for (size_t i = 0; i < crossed.size(); ++i) {
      const Wall& w = m.walls[crossed[i]];
      std::vector<Q> at = cand.coords_at(m, a, b, ta[i]);
      Q margin = at[w.g] - w.crit.eval(at);
      bool valid = cand.branch[i] == Branch::L ? margin <= 0 : margin >= 0;
      cand.checks.push_back({crossed[i], cand.branch[i], ta[i], margin, valid});
      cand.straight = cand.straight && valid;
    }
    out.push_back(std::move(cand));
  }
  return out;
}

SegmentDecision segment_exists(const WallModel& m, const BoxPoint& a, const BoxPoint& b) {
  SegmentDecision dec;
  for (auto& cand : candidate_segments(m, a, b)) {
    if (!cand.straight) continue;
    dec.count++;
    SegmentWitness w;
    std::vector<Q> ts;
    ts.push_back(Q(0));
    for (const auto& ch : cand.checks) ts.push_back(ch.t);
    ts.push_back(Q(1));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (const Q& t : ts) w.path.emplace_back(t, cand.coords_at(m, a, b, t));
    w.cand = std::move(cand);
    dec.witnesses.push_back(std::move(w));
  }
  return dec;
}

bool certify_witness(const WallModel& m, const BoxPoint& a, const BoxPoint& b,
                     const SegmentWitness& w) {
  if (!in_bounds(m, a) || !in_bounds(m, b)) return false;
  for (const auto& ch : w.cand.checks) {
    const Wall& wall = m.walls[ch.wall];
    Q fa = wall.functional.eval(a.c);
    Q fb = wall.functional.eval(b.c);
    if (fa * fb >= 0) return false;
    if (ch.t != -fa / (fb - fa)) return false;
    std::vector<Q> at = w.cand.coords_at(m, a, b, ch.t);
    if (wall.functional.eval(at) != 0) return false;
    Q margin = at[wall.g] - wall.crit.eval(at);
    if (margin != ch.margin) return false;
    bool valid = ch.branch == Branch::L ? margin <= 0 : margin >= 0;
    if (!valid || !ch.valid) return false;
  }
  // Path samples must be exactly the branch-consistent interpolation and
  // stay inside the box.
  for (const auto& [t, coords] : w.path) {
    if (t < 0 || t > 1) return false;
    if (coords != w.cand.coords_at(m, a, b, t)) return false;
    if (!in_bounds(m, BoxPoint{coords})) return false;
  }
  if (w.path.empty() || w.path.front().first != 0 || w.path.back().first != 1) return false;
  return w.path.front().second == a.c && w.path.back().second == b.c;
}

std::vector<BoxPoint> grid_points(const WallModel& m, size_t per_axis) {
  if (per_axis == 0) throw InvalidArgument("grid needs at least one value per axis");
  size_t n = m.dim();
  std::vector<std::vector<Q>> axis(n);
  for (size_t j = 0; j < n; ++j) {
    const auto& [lo, hi] = m.bounds[j];
    if (per_axis == 1) {
      axis[j].push_back((lo + hi) / 2);
    } else {
      for (size_t i = 0; i < per_axis; ++i)
        axis[j].push_back(lo + (hi - lo) * Q(long(i)) / Q(long(per_axis - 1)));
    }
  }
  std::vector<BoxPoint> out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    BoxPoint p;
    p.c.resize(n);
    for (size_t j = 0; j < n; ++j) p.c[j] = axis[j][idx[j]];
    if (in_bounds(m, p)) out.push_back(std::move(p));
    size_t j = 0;
    while (j < n && ++idx[j] == per_axis) idx[j++] = 0;
    if (j == n) break;
  }
  return out;
}

ScanReport convexity_scan(const WallModel& m, size_t per_axis, Exec exec) {
  std::vector<BoxPoint> pts = grid_points(m, per_axis);
  size_t n = pts.size();
  ScanReport rep;
  rep.points = n;

  struct RowResult {
    long min_count = -1, max_count = -1;
    size_t pairs = 0, zeros = 0;
    std::vector<std::pair<BoxPoint, BoxPoint>> zero_pairs;
  };
  std::vector<RowResult> rows(n);

  auto run_row = [&](size_t i) {
    RowResult& r = rows[i];
    for (size_t j = i + 1; j < n; ++j) {
      long c = segment_exists(m, pts[i], pts[j]).count;
      r.pairs++;
      if (r.min_count < 0 || c < r.min_count) r.min_count = c;
      if (c > r.max_count) r.max_count = c;
      if (c == 0) {
        r.zeros++;
        if (r.zero_pairs.size() < kZeroPairCap) r.zero_pairs.emplace_back(pts[i], pts[j]);
      }
    }
  };

  if (exec == Exec::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(n); ++i) run_row(size_t(i));
  } else {
    for (size_t i = 0; i < n; ++i) run_row(i);
  }

  rep.min_count = -1;
  for (const auto& r : rows) {
    rep.pairs += r.pairs;
    rep.zero_pair_count += r.zeros;
    if (r.pairs) {
      if (rep.min_count < 0 || r.min_count < rep.min_count) rep.min_count = r.min_count;
      if (r.max_count > rep.max_count) rep.max_count = r.max_count;
    }
    for (const auto& zp : r.zero_pairs)
      if (rep.zero_pairs.size() < kZeroPairCap) rep.zero_pairs.push_back(zp);
  }
  if (rep.min_count < 0) rep.min_count = 0;
  return rep;
}

WallModel focus_box_model(const Q& k, const Q& delta, const Q& delta_p, const Q& crit) {
  if (delta <= 0 || delta_p <= 0) throw InvalidArgument("box half-widths must be positive");
  WallModel m;
  m.names = {"F", "G"};
  m.bounds = {{-delta, delta}, {-delta_p, delta_p}};
  Wall w;
  w.functional = AffineFunc::coordinate(0, 2);
  w.k = k;
  w.g = 1;
  w.crit = CritProfile::constant(crit, 2);
  m.walls.push_back(std::move(w));
  m.validate();
  return m;
}

std::tuple<WallModel, BoxPoint, BoxPoint> nonconvex_focus2_model() {
  WallModel m;
  m.names = {"F1", "F2", "G1", "G2"};
  m.bounds.assign(4, {Q(-1), Q(1)});

  Wall w1;
  w1.functional = AffineFunc::coordinate(0, 4);
  w1.k = 1;
  w1.g = 2;
  w1.crit.arg = AffineFunc::coordinate(3, 4);
  w1.crit.pts = {{Q(0), Q(-1, 4)}, {Q(1), Q(7, 4)}};  // 2y - 1/4

  Wall w2;
  w2.functional = AffineFunc::coordinate(1, 4);
  w2.k = 1;
  w2.g = 3;
  w2.crit.arg = AffineFunc::coordinate(2, 4);
  w2.crit.pts = {{Q(0), Q(3, 4)}, {Q(1), Q(-5, 4)}};  // 3/4 - 2x

  m.walls = {std::move(w1), std::move(w2)};
  m.validate();

  BoxPoint a{{Q(-1), Q(-1), Q(0), Q(0)}};
  BoxPoint b{{Q(1), Q(1), Q(0), Q(0)}};
  return {std::move(m), std::move(a), std::move(b)};
}

std::tuple<WallModel, BoxPoint, BoxPoint> dim3_two_curve_model() {
  WallModel m;
  m.names = {"F", "G1", "G2"};
  m.bounds.assign(3, {Q(-1), Q(1)});

  // Wall at {F = 0}, oriented so its positive side is F < 0.
  Wall w1;
  w1.functional.coeffs = {Q(-1), Q(0), Q(0)};
  w1.k = 1;
  w1.g = 1;
  w1.crit.arg = AffineFunc::coordinate(2, 3);
  w1.crit.pts = {{Q(0), Q(-1, 4)}, {Q(1), Q(15, 4)}};  // 4y - 1/4

  // Wall at {F = 1/2}.
  Wall w2;
  w2.functional.coeffs = {Q(1), Q(0), Q(0)};
  w2.functional.c = Q(-1, 2);
  w2.k = 1;
  w2.g = 2;
  w2.crit.arg = AffineFunc::coordinate(1, 3);
  w2.crit.pts = {{Q(0), Q(1, 2)}, {Q(1), Q(-7, 2)}};  // 1/2 - 4x

  m.walls = {std::move(w1), std::move(w2)};
  m.validate();

  // Coarse scan for a pair with no straight segment between them.
  std::vector<BoxPoint> pts = grid_points(m, 5);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (segment_exists(m, pts[i], pts[j]).count == 0) return {std::move(m), pts[i], pts[j]};
  throw SearchFailed("no obstructed pair in the dim-3 model grid");
}

}  // namespace af
