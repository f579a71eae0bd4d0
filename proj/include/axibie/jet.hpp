#pragma once

// Two-variable truncated Taylor arithmetic to second order ("jets").
// A Jet2 carries a value and its partial derivatives with respect to the two
// active coordinates (called r and z throughout): v, dr, dz, drr, drz, dzz.
//
// Every kernel derivative in this library flows through this one type, so the
// closed-form derivative identities only need to be verified once (they are,
// against finite differences and quadrature oracles, in the test suite).

#include <cmath>

#include "axibie/errors.hpp"

namespace axibie {

struct Jet2 {
  double v = 0.0;
  double dr = 0.0, dz = 0.0;
  double drr = 0.0, drz = 0.0, dzz = 0.0;

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
  static Jet2 var_r(double r) { return {r, 1, 0, 0, 0, 0}; }
  static Jet2 var_z(double z) { return {z, 0, 1, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.dr + b.dr, a.dz + b.dz, a.drr + b.drr, a.drz + b.drz, a.dzz + b.dzz};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.dr - b.dr, a.dz - b.dz, a.drr - b.drr, a.drz - b.drz, a.dzz - b.dzz};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.dr, -a.dz, -a.drr, -a.drz, -a.dzz}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 c;
  c.v = a.v * b.v;
  c.dr = a.dr * b.v + a.v * b.dr;
  c.dz = a.dz * b.v + a.v * b.dz;
  c.drr = a.drr * b.v + 2.0 * a.dr * b.dr + a.v * b.drr;
  c.drz = a.drz * b.v + a.dr * b.dz + a.dz * b.dr + a.v * b.drz;
  c.dzz = a.dzz * b.v + 2.0 * a.dz * b.dz + a.v * b.dzz;
  return c;
}

inline Jet2 operator+(const Jet2& a, double s) { return a + Jet2::constant(s); }
inline Jet2 operator+(double s, const Jet2& a) { return a + Jet2::constant(s); }
inline Jet2 operator-(const Jet2& a, double s) { return a - Jet2::constant(s); }
inline Jet2 operator-(double s, const Jet2& a) { return Jet2::constant(s) - a; }
inline Jet2 operator*(const Jet2& a, double s) {
  return {a.v * s, a.dr * s, a.dz * s, a.drr * s, a.drz * s, a.dzz * s};
}
inline Jet2 operator*(double s, const Jet2& a) { return a * s; }

// Composition with a scalar function given by (f(g), f'(g), f''(g)).
inline Jet2 compose(double f, double fp, double fpp, const Jet2& g) {
  Jet2 c;
  c.v = f;
  c.dr = fp * g.dr;
  c.dz = fp * g.dz;
  c.drr = fpp * g.dr * g.dr + fp * g.drr;
  c.drz = fpp * g.dr * g.dz + fp * g.drz;
  c.dzz = fpp * g.dz * g.dz + fp * g.dzz;
  return c;
}

inline Jet2 recip(const Jet2& a) {
  if (a.v == 0.0) throw DomainError("jet reciprocal of zero");
  const double iv = 1.0 / a.v;
  return compose(iv, -iv * iv, 2.0 * iv * iv * iv, a);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * recip(b); }
inline Jet2 operator/(const Jet2& a, double s) { return a * (1.0 / s); }
inline Jet2 operator/(double s, const Jet2& a) { return recip(a) * s; }

inline Jet2 sqrt(const Jet2& a) {
  if (!(a.v > 0.0)) throw DomainError("jet sqrt of non-positive value");
  const double s = std::sqrt(a.v);
  return compose(s, 0.5 / s, -0.25 / (s * a.v), a);
}

inline Jet2 log(const Jet2& a) {
  if (!(a.v > 0.0)) throw DomainError("jet log of non-positive value");
  const double iv = 1.0 / a.v;
  return compose(std::log(a.v), iv, -iv * iv, a);
}

}  // namespace axibie
