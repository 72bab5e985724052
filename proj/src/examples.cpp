#include "affinefocus/examples.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "affinefocus/errors.hpp"

namespace af {

namespace {

// Affine map with linear part m fixing the point p.
AffineT fixing(const LinZ& m, const Vec2& p) { return {m, p - m.apply(p)}; }

}  // namespace

Atlas focus_box_atlas(long k, const Q& delta, const Q& delta_p) {
  if (k < 1 || delta <= 0 || delta_p <= 0)
    throw InvalidParams("focus box needs k >= 1 and positive half-widths");
  Atlas a;
  a.charts.push_back({0,
                      {{-delta, -delta_p},
                       {Q(0), -delta_p},
                       {Q(0), Q(0)},
                       {Q(0), delta_p},
                       {-delta, delta_p}}});
  // Right half, resheared below the cut through the focus: a trapezoid while
  // the cut exits through the far side, a triangle once it reaches the floor.
  std::vector<Vec2> right;
  if (2 * delta_p > k * delta)
    right = {{Q(0), -delta_p}, {delta, -delta_p}, {delta, delta_p - k * delta},
             {Q(0), delta_p},  {Q(0), Q(0)}};
  else
    right = {{Q(0), -delta_p}, {2 * delta_p / k, -delta_p}, {Q(0), delta_p}, {Q(0), Q(0)}};
  a.charts.push_back({1, std::move(right)});
  size_t last = a.charts[1].size() - 1;
  a.gluings.push_back({{0, 1}, {1, last}, AffineT::identity(), "wall low"});
  a.gluings.push_back({{0, 2}, {1, last - 1}, {LinZ{1, 0, -Z(k), 1}, {}}, "wall high"});
  a.focus.push_back({{0, 2}, k});
  return a;
}

FlowerData flower_data() {
  FlowerData d;
  d.A = {Q(0), Q(0)};
  d.O[0] = {Q(0), Q(3)};
  d.O[1] = {Q(2), Q(2)};
  d.P[0] = {Q(0), Q(6)};
  d.P[1] = {Q(4), Q(4)};
  d.Q[0] = {Q(0), Q(8)};
  d.Q[1] = {Q(6), Q(6)};
  d.M[0] = LinZ{1, 2, 0, 1};
  d.M[1] = LinZ{2, 1, -1, 0};
  LinZ S{0, 1, -1, 0};  // quarter turn
  LinZ Si = S.inverse();
  for (size_t c = 0; c + 2 < 8; ++c) {
    d.O[c + 2] = S.apply(d.O[c]);
    d.P[c + 2] = S.apply(d.P[c]);
    d.Q[c + 2] = S.apply(d.Q[c]);
    d.M[c + 2] = S * d.M[c] * Si;
  }
  return d;
}

Atlas shuriken_flower() {
  FlowerData d = flower_data();
  Atlas at;
  for (size_t c = 0; c < 8; ++c) {
    size_t n = (c + 1) % 8;
    at.charts.push_back({long(c), {d.A, d.O[n], d.Q[c], d.P[c], d.O[c]}});
  }
  for (size_t c = 0; c < 8; ++c) {
    size_t n = (c + 1) % 8;
    at.gluings.push_back({{c, 0}, {n, 4}, AffineT::identity(), "spoke"});
    at.gluings.push_back({{c, 1}, {n, 3}, fixing(d.M[n], d.O[n]), "slit"});
  }
  for (size_t c = 0; c < 8; ++c) at.focus.push_back({{c, 4}, c % 2 == 0 ? 2 : 1});
  return at;
}

OctagonData octagon_data() {
  OctagonData d;
  d.C = {Q(-6), Q(7)};
  Vec2 D = d.C * Q(2);  // center of the half-turn symmetry
  d.o[0] = {Q(-3), Q(6)};
  d.b[0] = {Q(0), Q(6)};
  d.a[1] = {Q(0), Q(8)};
  d.o[1] = {Q(-1), Q(8)};
  d.b[1] = {Q(0), Q(10)};
  d.a[2] = {Q(-2), Q(12)};
  d.o[2] = {Q(-3), Q(12)};
  d.b[2] = {Q(-3), Q(13)};
  d.a[3] = {Q(-5), Q(13)};
  d.o[3] = {Q(-6), Q(12)};
  d.b[3] = {Q(-7), Q(13)};
  d.a[4] = {Q(-9), Q(11)};
  d.Pm[0] = LinZ{2, -1, 1, 0};
  d.Pm[1] = LinZ{1, 0, 2, 1};
  d.Pm[2] = LinZ{0, -1, 1, 2};
  d.Pm[3] = LinZ{1, -2, 0, 1};
  for (size_t j = 0; j < 4; ++j) {
    d.o[j + 4] = D - d.o[j];
    d.b[j + 4] = D - d.b[j];
    d.Pm[j + 4] = d.Pm[j];
  }
  for (size_t j = 1; j <= 3; ++j) d.a[j + 4] = D - d.a[j];
  d.a[0] = D - d.a[4];
  return d;
}

Atlas complement_octagon() {
  OctagonData d = octagon_data();
  Atlas at;
  for (size_t j = 0; j < 8; ++j) {
    size_t n = (j + 1) % 8;
    at.charts.push_back({long(j), {d.C, d.o[j], d.b[j], d.a[n], d.o[n]}});
  }
  for (size_t j = 0; j < 8; ++j) {
    size_t n = (j + 1) % 8;
    at.gluings.push_back({{j, 4}, {n, 0}, AffineT::identity(), "hub"});
    at.gluings.push_back({{j, 3}, {n, 1}, fixing(d.Pm[n], d.o[n]), "slit"});
  }
  for (size_t j = 0; j < 8; ++j) at.focus.push_back({{j, 1}, j % 2 == 0 ? 1 : 2});
  return at;
}

Atlas black_hole_sphere() {
  FlowerData f = flower_data();
  OctagonData g = octagon_data();
  Atlas at = shuriken_flower();
  Atlas oct = complement_octagon();
  for (Chart& ch : oct.charts) {
    ch.id += 8;
    at.charts.push_back(std::move(ch));
  }
  for (Gluing& gl : oct.gluings) {
    gl.src.chart += 8;
    gl.dst.chart += 8;
    at.gluings.push_back(std::move(gl));
  }
  for (FocusSpec& fs : oct.focus) {
    fs.at.chart += 8;
    at.focus.push_back(fs);
  }
  // Rim maps petal by petal: crossing a flower slit and then the rim must
  // agree with crossing the rim and then the octagon slit.
  std::array<AffineT, 8> mu;
  mu[0] = AffineT::identity();
  for (size_t i = 0; i + 1 < 8; ++i)
    mu[i + 1] =
        fixing(g.Pm[i + 1], g.o[i + 1]).compose(mu[i]).compose(fixing(f.M[i + 1], f.O[i + 1]).inverse());
  AffineT around = fixing(g.Pm[0], g.o[0]).compose(mu[7]).compose(fixing(f.M[0], f.O[0]).inverse());
  if (!(around == mu[0])) throw GluingMismatch("rim transport does not close up");
  for (size_t i = 0; i < 8; ++i) {
    size_t n = (i + 1) % 8;
    if (mu[i].apply(f.P[i]) != g.b[i] || mu[i].apply(f.Q[i]) != g.a[n])
      throw GluingMismatch("rim endpoints disagree between flower and octagon");
    at.gluings.push_back({{i, 2}, {8 + i, 2}, mu[i], "rim"});
  }
  return at;
}

namespace {

// Octant sphere: every chart is the standard triangle with midpoint
// vertices; corner slots 0,2,4 carry the coordinate poles, midpoint slots
// 1,3,5 the foci. Positive-parity octants read the poles as (X,Y,Z) in ccw
// order, negative ones as (X,Z,Y), so neighbors across one sign flip share
// the edge named by the other two axes.
const long kHex[6][2] = {{0, 0}, {2, 0}, {4, 0}, {2, 2}, {0, 4}, {0, 2}};

std::array<int, 3> axes_of(const std::array<int, 3>& o) {
  return o[0] * o[1] * o[2] == 1 ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{0, 2, 1};
}

// Vertex slot where the half of the pair-axes edge nearest to near_ax starts.
int half_edge_slot(const std::array<int, 3>& o, int ax1, int ax2, int near_ax) {
  std::array<int, 3> axs = axes_of(o);
  auto pos = [&](int ax) { return int(std::find(axs.begin(), axs.end(), ax) - axs.begin()); };
  int i = pos(ax1), j = pos(ax2);
  int lo = (j - i + 3) % 3 == 1 ? i : j;
  int hi = i + j - lo;
  static const int corner_slot[3] = {0, 2, 4};
  int mid_slot = lo == 0 && hi == 1 ? 1 : (lo == 1 ? 3 : 5);
  return pos(near_ax) == lo ? corner_slot[lo] : mid_slot;
}

// Extended gcd with floor division: a*x + b*y = gcd(a,b) > 0.
std::pair<Z, Z> gcdext(const Z& a, const Z& b) {
  if (b == 0) return {a > 0 ? 1 : -1, 0};
  Z q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  auto [x, y] = gcdext(b, r);
  return {y, x - q * y};
}

// Completes a primitive e to a positive unimodular basis: cross(e, v) = 1.
ZVec2 perp_partner(const ZVec2& e) {
  auto [x, y] = gcdext(e.x, e.y);
  return {-y, x};
}

// Unimodular m with m u1 = w1, m u2 = w2.
LinZ lin_map_pair(const ZVec2& u1, const ZVec2& u2, const ZVec2& w1, const ZVec2& w2) {
  Z d = cross(u1, u2);
  Z a = u2.y / d, b = -u2.x / d;
  Z c = -u1.y / d, e = u1.x / d;
  return {w1.x * a + w2.x * c, w1.x * b + w2.x * e, w1.y * a + w2.y * c, w1.y * b + w2.y * e};
}

// Glues src edge p0->p1 onto dst edge q0->q1 endpoint-reversing, twisted by
// an integer shear along the edge direction.
AffineT glue_map(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1, long lam) {
  auto [eu, cu] = primitive(p1 - p0);
  auto [ew, cw] = primitive(q0 - q1);
  if (cu != cw) throw StructuralError("glued edges have different lengths");
  LinZ lin = lin_map_pair(eu, perp_partner(eu), ew, perp_partner(ew)) * parabolic_from(eu, lam);
  return {lin, q1 - lin.apply(p0)};
}

size_t octant_index(const std::array<int, 3>& o) {
  return size_t(((1 - o[0]) / 2) * 4 + ((1 - o[1]) / 2) * 2 + (1 - o[2]) / 2);
}

bool octant_even(size_t c) { return ((c & 1) + ((c >> 1) & 1) + ((c >> 2) & 1)) % 2 == 0; }

// Shear parameter per half-edge class: the edge skips the flipped axis,
// the near axis names which half.
long sphere_shear(int ax_flip, int near) {
  switch (ax_flip) {
    case 2: return near == 0 ? 0 : 2;   // XY edges
    case 1: return near == 0 ? 0 : -2;  // XZ edges
    default: return near == 1 ? -1 : 1; // YZ edges
  }
}

}  // namespace

Atlas convex_sphere() {
  Atlas at;
  std::array<std::array<int, 3>, 8> oct;
  {
    size_t i = 0;
    for (int sx : {1, -1})
      for (int sy : {1, -1})
        for (int sz : {1, -1}) oct[i++] = {sx, sy, sz};
  }
  for (size_t c = 0; c < 8; ++c) {
    Chart ch;
    ch.id = long(c);
    for (auto& p : kHex) ch.v.push_back({Q(p[0]), Q(p[1])});
    at.charts.push_back(std::move(ch));
  }
  auto hexv = [](int s) { return Vec2{Q(kHex[s % 6][0]), Q(kHex[s % 6][1])}; };
  for (int ax_flip = 0; ax_flip < 3; ++ax_flip) {
    int ax1 = ax_flip == 0 ? 1 : 0;
    int ax2 = ax_flip == 2 ? 1 : 2;
    for (const auto& o : oct) {
      if (o[ax_flip] != 1) continue;
      std::array<int, 3> o2 = o;
      o2[ax_flip] = -1;
      bool even = o[0] * o[1] * o[2] == 1;
      const std::array<int, 3>& src = even ? o : o2;
      const std::array<int, 3>& dst = even ? o2 : o;
      for (int near : {ax1, ax2}) {
        int es = half_edge_slot(src, ax1, ax2, near);
        int ed = half_edge_slot(dst, ax1, ax2, near);
        at.gluings.push_back({{octant_index(src), size_t(es)},
                              {octant_index(dst), size_t(ed)},
                              glue_map(hexv(es), hexv(es + 1), hexv(ed), hexv(ed + 1),
                                       sphere_shear(ax_flip, near)),
                              "half edge"});
      }
    }
  }
  for (size_t c = 0; c < 8; ++c) {
    if (!octant_even(c)) continue;
    for (size_t ms : {1, 3, 5}) at.focus.push_back({{c, ms}, 2});
  }
  return at;
}

namespace {

struct HalfPlane {
  Vec2 n;
  Q c;  // keep side: n.p <= c
};

std::vector<Vec2> clip_poly(const std::vector<Vec2>& poly, const HalfPlane& h) {
  std::vector<Vec2> out;
  size_t m = poly.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    Q fa = dot(h.n, a) - h.c;
    Q fb = dot(h.n, b) - h.c;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fb < 0 && fa > 0)) {
      Q t = fa / (fa - fb);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

// Parameter range of p0 + t (p1 - p0), t in [0,1], kept by the halfplane.
std::optional<std::pair<Q, Q>> seg_range(const Vec2& p0, const Vec2& p1, const HalfPlane& h) {
  Q f0 = dot(h.n, p0) - h.c;
  Q f1 = dot(h.n, p1) - h.c;
  if (f0 <= 0 && f1 <= 0) return std::pair{Q(0), Q(1)};
  if (f0 > 0 && f1 > 0) return std::nullopt;
  Q t = f0 / (f0 - f1);
  if (f0 <= 0) return std::pair{Q(0), t};
  return std::pair{t, Q(1)};
}

// Clips every chart by its keep halfplane, regluing the surviving pieces of
// each gluing and keeping the foci strictly inside.
Atlas clipped_sub_atlas(const Atlas& at, const std::vector<HalfPlane>& planes) {
  Atlas sub;
  for (size_t ci = 0; ci < at.charts.size(); ++ci) {
    std::vector<Vec2> p = clip_poly(at.charts[ci].v, planes[ci]);
    if (p.size() < 3) throw StructuralError("clip plane removed a whole chart");
    sub.charts.push_back({at.charts[ci].id, std::move(p)});
  }
  auto vertex_of = [&](size_t ci, const Vec2& pos) -> size_t {
    const std::vector<Vec2>& v = sub.charts[ci].v;
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] == pos) return i;
    throw StructuralError("clipped point is not a chart vertex");
  };
  for (const Gluing& gl : at.gluings) {
    const Chart& cs = at.charts[gl.src.chart];
    Vec2 p0 = cs.vertex(gl.src.edge);
    Vec2 p1 = cs.vertex(gl.src.edge + 1);
    auto r1 = seg_range(p0, p1, planes[gl.src.chart]);
    auto r2 = seg_range(gl.map.apply(p0), gl.map.apply(p1), planes[gl.dst.chart]);
    if (!r1 || !r2) continue;
    Q t0 = std::max(r1->first, r2->first);
    Q t1 = std::min(r1->second, r2->second);
    if (t0 >= t1) continue;
    Vec2 a0 = p0 + (p1 - p0) * t0;
    Vec2 a1 = p0 + (p1 - p0) * t1;
    size_t es = vertex_of(gl.src.chart, a0);
    size_t ed = vertex_of(gl.dst.chart, gl.map.apply(a1));
    if (sub.charts[gl.src.chart].vertex(es + 1) != a1 ||
        sub.charts[gl.dst.chart].vertex(ed + 1) != gl.map.apply(a0))
      throw StructuralError("clipped gluing does not land on a single edge");
    sub.gluings.push_back({{gl.src.chart, es}, {gl.dst.chart, ed}, gl.map, gl.tag});
  }
  for (const FocusSpec& f : at.focus) {
    Vec2 pos = at.charts[f.at.chart].vertex(f.at.vertex);
    if (dot(planes[f.at.chart].n, pos) - planes[f.at.chart].c < 0)
      sub.focus.push_back({{f.at.chart, vertex_of(f.at.chart, pos)}, f.index});
  }
  return sub;
}

}  // namespace

Atlas convex_sphere_strip(char axis) {
  Atlas sphere = convex_sphere();
  std::vector<HalfPlane> planes;
  for (size_t c = 0; c < 8; ++c) {
    // Cuts run through the midpoints of the half-edges around each pole of
    // the strip axis, so both polar caps come off along straight circles.
    if (axis == 'X')
      planes.push_back({{Q(-1), Q(-1)}, Q(-3)});
    else if (axis == 'Y')
      planes.push_back(octant_even(c) ? HalfPlane{{Q(1), Q(0)}, Q(1)}
                                      : HalfPlane{{Q(0), Q(1)}, Q(1)});
    else if (axis == 'Z')
      planes.push_back(octant_even(c) ? HalfPlane{{Q(0), Q(1)}, Q(1)}
                                      : HalfPlane{{Q(1), Q(0)}, Q(1)});
    else
      throw InvalidArgument("strip axis must be 'X', 'Y' or 'Z'");
  }
  return clipped_sub_atlas(sphere, planes);
}

std::tuple<WallModel, BoxPoint, BoxPoint> negative_k_box_model() {
  return {focus_box_model(Q(-1), Q(1), Q(2)), BoxPoint{{Q(-1), Q(1, 4)}},
          BoxPoint{{Q(1), Q(1, 4)}}};
}

std::tuple<WallModel, BoxPoint, BoxPoint> focus2_box_model() { return nonconvex_focus2_model(); }

std::tuple<WallModel, BoxPoint, BoxPoint> dim3_model() { return dim3_two_curve_model(); }

const std::vector<ExampleDescriptor>& example_registry() {
  static const std::vector<ExampleDescriptor> reg = {
      {"focus_box", "atlas", "one index-1 focus on a wall (k=1, delta=1, delta'=2)"},
      {"shuriken_flower", "atlas",
       "eight petals around a center; foci alternate index 2,1; vertex data generated from two "
       "anchor monodromies by quarter-turn symmetry"},
      {"complement_octagon", "atlas",
       "flat octagon whose boundary invariants match the flower edge for edge"},
      {"black_hole_sphere", "atlas",
       "flower sewn to octagon; closed, total focus index 24, not convex"},
      {"convex_sphere", "atlas",
       "eight octant triangles; 12 index-2 foci at edge midpoints, globally convex"},
      {"convex_sphere_strip_X", "atlas", "equatorial annulus of the convex sphere, X axis"},
      {"convex_sphere_strip_Y", "atlas", "equatorial annulus of the convex sphere, Y axis"},
      {"convex_sphere_strip_Z", "atlas", "equatorial annulus of the convex sphere, Z axis"},
      {"negative_k_box", "wall_model",
       "k=-1 wall with a point pair no straight segment joins"},
      {"focus2_box", "wall_model", "index-2 focus wall; every candidate segment breaks"},
      {"dim3_box", "wall_model",
       "two critical curves in a 3-d box; every candidate segment breaks"},
  };
  return reg;
}

Atlas build_example_atlas(const std::string& name) {
  if (name == "focus_box") return focus_box_atlas(1, Q(1), Q(2));
  if (name == "shuriken_flower") return shuriken_flower();
  if (name == "complement_octagon") return complement_octagon();
  if (name == "black_hole_sphere") return black_hole_sphere();
  if (name == "convex_sphere") return convex_sphere();
  const std::string strip = "convex_sphere_strip_";
  if (name.size() == strip.size() + 1 && name.compare(0, strip.size(), strip) == 0)
    return convex_sphere_strip(name.back());
  throw InvalidArgument("no atlas example named " + name);
}

std::tuple<WallModel, BoxPoint, BoxPoint> build_example_model(const std::string& name) {
  if (name == "negative_k_box") return negative_k_box_model();
  if (name == "focus2_box") return focus2_box_model();
  if (name == "dim3_box") return dim3_model();
  throw InvalidArgument("no wall model example named " + name);
}

}  // namespace af
