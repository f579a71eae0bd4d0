#pragma once

// Ring-source kernels of the axisymmetric quasi-harmonic operators.
//
// For a field point (r, z) and a source ring (a, zeta) in the same meridian
// plane, with d = z - zeta,
//   rho_plus^2  = (r+a)^2 + d^2        rho_minus^2 = (r-a)^2 + d^2
//   m  = 4 r a / rho_plus^2            mc = rho_minus^2 / rho_plus^2
//   w0 = (2/pi) K(m) / rho_plus        w1 = (2/pi) h(m) / rho_plus
// with h(m) = ((2-m)K - 2E)/m.  w0 is the mean of 1/distance over the ring
// (the J0*J0 transform kernel) and w1 its cos-weighted sibling (J1*J1).
//
// mc is always computed directly from the geometry (never as 1-m), which is
// what keeps the elliptic evaluations fully accurate near coincidence.
//
// Derivatives are obtained by jet arithmetic, so w0_jet/w1_jet return exact
// first and second field-point derivatives.  The clam_* functions return the
// coefficient of L = ln(1/sqrt(mc)) in each kernel-derivative scalar; they
// are the analytic ingredient of the logarithmic Nystrom splitting and stay
// regular through coincidence.

#include <cmath>
#include <numbers>

#include "axibie/elliptic.hpp"
#include "axibie/errors.hpp"
#include "axibie/jet.hpp"

namespace axibie {

struct FieldPoint {
  double r = 0.0;
  double z = 0.0;
};

struct RingPole {
  double a = 0.0;
  double zeta = 0.0;
};

// Jet of a kernel with respect to the field point (r, z).
struct KernelJet {
  double value = 0.0;
  double d_r = 0.0, d_z = 0.0;
  double d_rr = 0.0, d_rz = 0.0, d_zz = 0.0;

  static KernelJet from(const Jet2& j) { return {j.v, j.dr, j.dz, j.drr, j.drz, j.dzz}; }
};

// Scalar geometry shared by kernels and splitting coefficients.
struct RingGeom {
  double d = 0.0;
  double rho_p2 = 0.0, rho_p = 0.0;
  double rho_m2 = 0.0;
  double m = 0.0, mc = 0.0;
  double D = 0.0;   // a^2 - r^2 + d^2
  double Dq = 0.0;  // a (a + r) + d^2
};

namespace detail {

inline void check_ring_args(const FieldPoint& p, const RingPole& q) {
  if (!(q.a > 0.0) || !std::isfinite(q.a) || !std::isfinite(q.zeta))
    throw err_invalid_parameter("ring pole requires a > 0 and finite coordinates");
  if (!(p.r >= 0.0) || !std::isfinite(p.r) || !std::isfinite(p.z))
    throw err_invalid_parameter("field point requires r >= 0 and finite coordinates");
}

inline RingGeom ring_geom(const FieldPoint& p, const RingPole& q) {
  check_ring_args(p, q);
  RingGeom g;
  g.d = p.z - q.zeta;
  const double sp = p.r + q.a;
  const double sm = p.r - q.a;
  g.rho_p2 = sp * sp + g.d * g.d;
  g.rho_m2 = sm * sm + g.d * g.d;
  g.rho_p = std::sqrt(g.rho_p2);
  if (g.rho_m2 < 1e-28 * g.rho_p2)
    throw err_pole_hit("field point coincides with the source ring");
  g.m = 4.0 * p.r * q.a / g.rho_p2;
  g.mc = g.rho_m2 / g.rho_p2;
  g.D = q.a * q.a - p.r * p.r + g.d * g.d;
  g.Dq = q.a * (q.a + p.r) + g.d * g.d;
  return g;
}

// Jets of rho_plus and m at the field point.
struct RingJets {
  Jet2 rho;  // rho_plus
  Jet2 m;
};

inline RingJets ring_jets(const FieldPoint& p, const RingPole& q) {
  const Jet2 jr = Jet2::var_r(p.r);
  const Jet2 jz = Jet2::var_z(p.z);
  const Jet2 X = jr + q.a;
  const Jet2 D = jz - q.zeta;
  const Jet2 R2 = X * X + D * D;
  RingJets out;
  out.rho = sqrt(R2);
  out.m = (4.0 * q.a) * jr / R2;
  return out;
}

}  // namespace detail

inline KernelJet w0_jet(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  const auto jets = detail::ring_jets(p, q);
  const auto d = elliptic_derivs(g.m, g.mc);
  const Jet2 Kj = compose(d.K, d.Kp, d.Kpp, jets.m);
  const Jet2 w = (2.0 / std::numbers::pi) * (Kj / jets.rho);
  return KernelJet::from(w);
}

inline KernelJet w1_jet(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  const auto jets = detail::ring_jets(p, q);
  const auto hs = h_set(g.m, g.mc);
  const Jet2 hj = compose(hs.h, hs.hp, hs.hpp, jets.m);
  const Jet2 w = (2.0 / std::numbers::pi) * (hj / jets.rho);
  return KernelJet::from(w);
}

inline double w0_value(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  return (2.0 / std::numbers::pi) * elliptic_ke_pair(g.m, g.mc).K / g.rho_p;
}

inline double w1_value(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  return (2.0 / std::numbers::pi) * h_of(g.m, g.mc) / g.rho_p;
}

// --- the divergence-form radial derivative of w1 ---------------------------
//
// w1f = (1/r) d(r w1)/dr = dw1/dr + w1/r.  It is the J0(t r) J1(t a) member
// of the kernel family and stays finite on the axis: w1f -> a / R^3 with
// R^2 = a^2 + d^2.  first_* are its field-point derivatives.

struct W1FJet {
  double value = 0.0;
  double d_r = 0.0;
  double d_z = 0.0;
};

inline W1FJet w1f_jet(const FieldPoint& p, const RingPole& q) {
  if (p.r == 0.0) {
    detail::check_ring_args(p, q);
    const double d = p.z - q.zeta;
    const double R2 = q.a * q.a + d * d;
    const double R = std::sqrt(R2);
    const double R3 = R2 * R;
    return {q.a / R3, 0.0, -3.0 * q.a * d / (R3 * R2)};
  }
  const KernelJet w1 = w1_jet(p, q);
  W1FJet f;
  f.value = w1.d_r + w1.value / p.r;
  f.d_r = w1.d_rr + w1.d_r / p.r - w1.value / (p.r * p.r);
  f.d_z = w1.d_rz + w1.d_z / p.r;
  return f;
}

// --- frame-contracted boundary combinations --------------------------------

// Direction cosines of a transformed boundary frame (inward normal); n1 pairs
// with the radial direction, n2 with the stretched axial direction.
struct FrameCosines {
  double n1 = 0.0;
  double n2 = 0.0;
};

struct BoundaryCombos {
  double dnG = 0.0;  // (1/r) d(r w1)/dn
  double dtG = 0.0;  // (1/r) d(r w1)/dtau
  double dng = 0.0;  // d w0 / dn
  double dtg = 0.0;  // d w0 / dtau
};

inline BoundaryCombos boundary_combos(const FieldPoint& p, const RingPole& q,
                                      const FrameCosines& f) {
  const KernelJet g0 = w0_jet(p, q);
  const KernelJet g1 = w1_jet(p, q);
  const W1FJet w1f = w1f_jet(p, q);
  BoundaryCombos c;
  c.dnG = w1f.value * f.n1 + g1.d_z * f.n2;
  c.dtG = g1.d_z * f.n1 - w1f.value * f.n2;
  c.dng = g0.d_r * f.n1 + g0.d_z * f.n2;
  c.dtg = g0.d_z * f.n1 - g0.d_r * f.n2;
  return c;
}

// --- half-plane Poisson kernel ---------------------------------------------

// Lambda(p, a; lambda) = -d/d(z~) w0 evaluated in the stretched plane
// (z~ = lambda z) with the source ring on the boundary.  For every z > 0 it
// integrates to exactly 1 against a da on (0, inf).
inline double poisson_kernel(const FieldPoint& p, double a, double lambda) {
  if (!(p.z > 0.0)) throw DomainError("poisson_kernel requires z > 0");
  if (!(lambda > 0.0)) throw err_invalid_parameter("poisson_kernel requires lambda > 0");
  const KernelJet w = w0_jet({p.r, lambda * p.z}, {a, 0.0});
  return -w.d_z;
}

// --- logarithmic splitting coefficients ------------------------------------
//
// Each on-boundary kernel scalar X obeys X = C_L[X] * ln(1/sqrt(mc)) +
// (smooth).  The functions below evaluate C_L[X] from the complementary-
// parameter expansions; all of them are regular through coincidence
// (mc -> 0) and are exact for every separation.

inline double clam_w0_d(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  const double pref = -2.0 * g.d / (std::numbers::pi * g.rho_p2 * g.rho_p);
  return pref * pe_over(g.mc, g.m);
}

inline double clam_w0_r(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  if (p.r == 0.0) return 0.0;  // kernel itself vanishes identically on the axis
  const double P = p_coeff(g.mc, g.m);
  const double peo = pe_over(g.mc, g.m);
  return (1.0 / (std::numbers::pi * g.rho_p * p.r)) * ((g.D / g.rho_p2) * peo - P);
}

inline double clam_w1_d(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  const double pref = 2.0 * g.d / (std::numbers::pi * g.rho_p2 * g.rho_p);
  return pref * ((4.0 / (std::numbers::pi * g.m)) * e_param(g.mc, g.m) - pe_over(g.mc, g.m));
}

inline double clam_w1f(const FieldPoint& p, const RingPole& q) {
  const RingGeom g = detail::ring_geom(p, q);
  const double P = p_coeff(g.mc, g.m);
  const double peo = pe_over(g.mc, g.m);
  const double TE = (2.0 / std::numbers::pi) * e_param(g.mc, g.m);
  const double pref = 2.0 / (std::numbers::pi * g.rho_p2 * g.rho_p);
  // (D - 2 Dq) collapses to -rho_plus^2 exactly.
  return pref * ((-g.rho_p2 * P + g.D * peo) / (2.0 * p.r) + (2.0 * (q.a + p.r) / g.m) * TE);
}

}  // namespace axibie
