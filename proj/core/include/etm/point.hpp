#pragma once

#include "etm/rational.hpp"

namespace etm {

// A pair (e, t) of edge and triangle homomorphism densities, kept exact.
struct DensityPoint {
  Rational e;
  Rational t;

  double ef() const { return to_double(e); }
  double tf() const { return to_double(t); }

  bool operator==(const DensityPoint&) const = default;
};

// Exact 2-vector used for directions and natural parameters.
struct Vec2 {
  Rational x;
  Rational y;

  bool operator==(const Vec2&) const = default;
};

inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rational dot(const Vec2& a, const DensityPoint& p) { return a.x * p.e + a.y * p.t; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(const Rational& c, const Vec2& v) { return {c * v.x, c * v.y}; }

}  // namespace etm
