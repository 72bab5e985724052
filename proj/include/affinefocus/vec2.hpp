#pragma once

#include <utility>

#include "affinefocus/rational.hpp"

namespace af {

struct Vec2 {
  Q x{0}, y{0};

  Vec2() = default;
  Vec2(Q px, Q py) : x(std::move(px)), y(std::move(py)) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(const Q& s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }

  bool is_zero() const { return x == 0 && y == 0; }
};

inline Vec2 operator*(const Q& s, const Vec2& v) { return v * s; }

inline Q cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Q dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Nonzero vectors pointing the same way.
inline bool same_ray(const Vec2& a, const Vec2& b) {
  return cross(a, b) == 0 && dot(a, b) > 0;
}

// Integer vector, for primitive directions and eigenvectors.
struct ZVec2 {
  Z x{0}, y{0};
  ZVec2() = default;
  ZVec2(Z px, Z py) : x(std::move(px)), y(std::move(py)) {}
  bool operator==(const ZVec2& o) const { return x == o.x && y == o.y; }
  Vec2 to_q() const { return {Q(x), Q(y)}; }
};

inline Z cross(const ZVec2& a, const ZVec2& b) { return a.x * b.y - a.y * b.x; }

// Writes v != 0 as content * prim with prim a primitive integer vector and
// content a positive rational.
std::pair<ZVec2, Q> primitive(const Vec2& v);

// Strict total order, x before y. Used for canonical representatives.
inline bool lex_less(const Vec2& a, const Vec2& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

size_t bit_size(const Vec2& v);

}  // namespace af
