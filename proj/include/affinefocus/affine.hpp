#pragma once

#include "affinefocus/vec2.hpp"

namespace af {

// 2x2 integer matrix with determinant +-1, row-major [[a,b],[c,d]].
struct LinZ {
  Z a{1}, b{0}, c{0}, d{1};

  LinZ() = default;
  LinZ(Z pa, Z pb, Z pc, Z pd)
      : a(std::move(pa)), b(std::move(pb)), c(std::move(pc)), d(std::move(pd)) {}

  static LinZ identity() { return {}; }

  Z det() const { return a * d - b * c; }
  Z trace() const { return a + d; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }
  bool operator==(const LinZ& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }

  Vec2 apply(const Vec2& v) const {
    return {Q(a) * v.x + Q(b) * v.y, Q(c) * v.x + Q(d) * v.y};
  }
  ZVec2 apply(const ZVec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

  LinZ operator*(const LinZ& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  // Valid only for det +-1 (checked).
  LinZ inverse() const;
};

// x -> lin * x + tr. Gluing maps and developed frames are these, with
// lin restricted to determinant +1 for gluings.
struct AffineT {
  LinZ lin;
  Vec2 tr;

  static AffineT identity() { return {}; }

  Vec2 apply(const Vec2& p) const { return lin.apply(p) + tr; }
  Vec2 apply_dir(const Vec2& d) const { return lin.apply(d); }

  // (this o o)(x) = this(o(x))
  AffineT compose(const AffineT& o) const { return {lin * o.lin, lin.apply(o.tr) + tr}; }
  AffineT inverse() const {
    LinZ li = lin.inverse();
    return {li, -li.apply(tr)};
  }
  bool operator==(const AffineT& o) const { return lin == o.lin && tr == o.tr; }
};

// Primitive integer eigenvector of a parabolic matrix (trace 2, not the
// identity), sign-normalized so the first nonzero entry is positive.
// Throws NotParabolic.
ZVec2 parabolic_eigenvector(const LinZ& m);

// Focus index of a parabolic m: the integer k with m*v - v = k*e where e is
// the primitive eigenvector above and v completes it to a positively
// oriented unimodular basis (det[e v] = +1). Conjugation-invariant;
// [[1,k],[0,1]] has index k.
long focus_index(const LinZ& m);

// The parabolic matrix with primitive eigenvector e and focus index k:
// I + k * e * rot(e)^T with rot(e) = (-e.y, e.x). Inverse of focus_index on
// primitive e.
LinZ parabolic_from(const ZVec2& e, long k);

// Affine length: b - a = len * prim with prim a primitive integer vector.
// Throws DegenerateSegment when a == b.
Q integral_length(const Vec2& a, const Vec2& b);

// Characteristic number of the corner p_prev -> p0 -> p1, read off against
// the following vertex p2. Normalizes by the orientation-preserving integral
// affine map taking p0 to the origin, p1 to (len, 0) and p_prev onto the
// positive y-axis, then intersects the image of edge p1->p2 with the x-axis
// direction: the image line is x = c*y + len. Requires the corner to be
// simple; throws DegenerateCorner otherwise.
Q characteristic_number(const Vec2& p_prev, const Vec2& p0, const Vec2& p1, const Vec2& p2);

}  // namespace af
