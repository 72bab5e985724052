#include "affinefocus/affine.hpp"

#include <cstdlib>

namespace af {

std::string to_string(const Q& x) {
  Q c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Q parse_q(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational");
  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s, den = "1";
  if (auto pos = s.find('/'); pos != std::string::npos) {
    num = s.substr(0, pos);
    den = s.substr(pos + 1);
    if (!digits(den) || den[0] == '-') throw ParseError("bad rational '" + s + "'");
  }
  if (!digits(num)) throw ParseError("bad rational '" + s + "'");
  Q q(num + "/" + den);
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::pair<ZVec2, Q> primitive(const Vec2& v) {
  if (v.is_zero()) throw InvalidArgument("primitive() of zero vector");
  Z den = lcm(v.x.get_den(), v.y.get_den());
  Z nx = v.x.get_num() * (den / v.x.get_den());
  Z ny = v.y.get_num() * (den / v.y.get_den());
  Z g = gcd(nx, ny);  // gmp gcd is nonnegative
  ZVec2 prim{nx / g, ny / g};
  Q content{g, den};
  content.canonicalize();
  return {prim, content};
}

size_t bit_size(const Vec2& v) { return bit_size(v.x) + bit_size(v.y); }

LinZ LinZ::inverse() const {
  Z dt = det();
  if (dt == 1) return {d, -b, -c, a};
  if (dt == -1) return {-d, b, c, -a};
  throw InvalidArgument("inverse of non-unimodular matrix");
}

ZVec2 parabolic_eigenvector(const LinZ& m) {
  if (m.trace() != 2 || m.is_identity()) throw NotParabolic();
  // Rows of m - I annihilate the eigenvector.
  Z na = m.a - 1, nb = m.b, nc = m.c, nd = m.d - 1;
  ZVec2 e;
  if (na != 0 || nb != 0)
    e = {-nb, na};
  else
    e = {-nd, nc};
  Z g = gcd(e.x, e.y);
  e = {e.x / g, e.y / g};
  if (e.x < 0 || (e.x == 0 && e.y < 0)) e = {-e.x, -e.y};
  return e;
}

long focus_index(const LinZ& m) {
  ZVec2 e = parabolic_eigenvector(m);
  // v with det[e v] = e.x*v.y - e.y*v.x = 1, via the extended gcd.
  Z g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), e.x.get_mpz_t(), e.y.get_mpz_t());
  ZVec2 v{-t, s};
  ZVec2 w = m.apply(v);
  w = {w.x - v.x, w.y - v.y};
  if (cross(e, w) != 0) throw NotParabolic("eigenline check failed");
  Z k = (e.x != 0) ? Z(w.x / e.x) : Z(w.y / e.y);
  if (!k.fits_slong_p()) throw InvalidArgument("focus index overflow");
  return k.get_si();
}

LinZ parabolic_from(const ZVec2& e, long k) {
  if (gcd(e.x, e.y) != 1) throw InvalidArgument("eigenvector must be primitive");
  Z kk(k);
  return {1 - kk * e.x * e.y, kk * e.x * e.x, -kk * e.y * e.y, 1 + kk * e.x * e.y};
}

Q integral_length(const Vec2& a, const Vec2& b) {
  if (a == b) throw DegenerateSegment();
  return primitive(b - a).second;
}

Q characteristic_number(const Vec2& p_prev, const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  if (p1 == p0 || p_prev == p0) throw DegenerateCorner("coincident corner points");
  auto [u, len] = primitive(p1 - p0);
  auto [w, wc] = primitive(p_prev - p0);
  (void)wc;
  // The normalization is integral iff (u, w) is a lattice basis with w on
  // the positive side, i.e. the corner is simple.
  if (cross(u, w) != 1) throw DegenerateCorner("corner is not simple");
  LinZ U{w.y, -w.x, -u.y, u.x};
  Vec2 phi = U.apply(p2 - p0);
  if (phi.y == 0) throw DegenerateCorner("next edge is collinear with the base edge");
  return (phi.x - len) / phi.y;
}

}  // namespace af
