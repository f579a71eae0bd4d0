#pragma once

// Displacement boundary-value problem for the half-space z >= 0.
//
// Given boundary displacements u_r(r, 0) = f1(r), u_z(r, 0) = f2(r), the
// solution separates over Hankel modes.  With A(t) = k2 l2 f1h - f2h and
// B(t) = f2h - k1 l1 f1h (l_j short for lambda_j),
//   u_r = -(1/delta) int t [ A e^{-t l1 z} + B e^{-t l2 z} ] J1(t r) dt
//   u_z = -(1/delta) int t [ k1 l1 A e^{-t l1 z} + k2 l2 B e^{-t l2 z} ] J0(t r) dt
// which restricts to (f1, f2) at z = 0.
//
// The same solution can be written as radial convolutions of the boundary
// data against ring-kernel derivatives evaluated in the two stretched planes
// (r, lambda_j z); convolution_displacement implements that form.  Agreement
// of the two routes is a strong end-to-end check of the kernel family.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include "axibie/bessel.hpp"
#include "axibie/errors.hpp"
#include "axibie/hankel.hpp"
#include "axibie/material.hpp"
#include "axibie/ring_kernels.hpp"

namespace axibie {

class HalfPlaneSolution {
 public:
  HalfPlaneSolution(const ElasticConstants& mat, CharacteristicData cd, SpectralData spec)
      : mat_(mat), cd_(cd), spec_(std::move(spec)) {}

  const CharacteristicData& characteristic() const { return cd_; }
  const SpectralData& spectrum() const { return spec_; }

  // Interior displacement (z >= 0; at z = 0 the truncated spectrum limits the
  // accuracy -- prefer boundary_trace there).
  Displacement displacement(double r, double z) const {
    if (!(r >= 0.0) || !(z >= 0.0) || !std::isfinite(r) || !std::isfinite(z))
      throw err_invalid_parameter("half-plane evaluation needs finite r >= 0, z >= 0");
    const double l1 = cd_.lambda1, l2 = cd_.lambda2;
    double ur = 0.0, uz = 0.0;
    for (std::size_t i = 0; i < spec_.t.size(); ++i) {
      const double t = spec_.t[i];
      const double A = cd_.k2 * l2 * spec_.f1h[i] - spec_.f2h[i];
      const double B = spec_.f2h[i] - cd_.k1 * l1 * spec_.f1h[i];
      const double e1 = std::exp(-t * l1 * z), e2 = std::exp(-t * l2 * z);
      const double wt = spec_.w[i] * t;
      ur += wt * (A * e1 + B * e2) * bessel_j1(t * r);
      uz += wt * (cd_.k1 * l1 * A * e1 + cd_.k2 * l2 * B * e2) * bessel_j0(t * r);
    }
    return {-ur / cd_.delta, -uz / cd_.delta};
  }

  // Boundary values recovered by cubic extrapolation of z0, z0/2, z0/4, z0/8
  // down to z = 0 (Lagrange weights -1/21, 2/3, -8/3, 64/21).
  Displacement boundary_trace(double r, double z0 = 0.04) const {
    if (!(z0 > 0.0)) throw err_invalid_parameter("boundary trace needs z0 > 0");
    const Displacement y1 = displacement(r, z0);
    const Displacement y2 = displacement(r, 0.5 * z0);
    const Displacement y3 = displacement(r, 0.25 * z0);
    const Displacement y4 = displacement(r, 0.125 * z0);
    auto combine = [](double a, double b, double c, double d) {
      return -a / 21.0 + (2.0 / 3.0) * b - (8.0 / 3.0) * c + (64.0 / 21.0) * d;
    };
    return {combine(y1.u_r, y2.u_r, y3.u_r, y4.u_r),
            combine(y1.u_z, y2.u_z, y3.u_z, y4.u_z)};
  }

 private:
  ElasticConstants mat_;
  CharacteristicData cd_;
  SpectralData spec_;
};

inline HalfPlaneSolution halfplane_solve(const ElasticConstants& mat,
                                         const BoundaryData& data,
                                         const SpectralGrid& grid = {}) {
  const CharacteristicData cd = characteristic_data(mat);
  data.check_decay();
  return HalfPlaneSolution(mat, cd, spectral_transform(data, grid));
}

// Exact single-branch mode: the displacement field generated by the potential
// phi = amp * t * e^{-t lambda z} J0(t r) on its branch (k, lambda).
inline Displacement mode_fields(double t, double lambda, double k, double amp, double r,
                                double z) {
  if (!(t > 0.0) || !(lambda > 0.0))
    throw err_invalid_parameter("mode requires t > 0 and lambda > 0");
  const double e = amp * t * t * std::exp(-t * lambda * z);
  return {-e * bessel_j1(t * r), -k * lambda * e * bessel_j0(t * r)};
}

// Conjugate-pair residuals of the axisymmetric Cauchy-Riemann relations for
// the mode pair psi = r J1(t r) e^{-t z}, phi = J0(t r) e^{-t z}:
//   d(psi)/dr + r d(phi)/dz = 0,    d(psi)/dz - r d(phi)/dr = 0,
// evaluated through the J0/J1 recurrences, so the return measures how
// consistently the Bessel pair satisfies them in floating point.
inline std::array<double, 2> cr_residual(double t, double r, double z) {
  if (!(t > 0.0) || !(r > 0.0))
    throw err_invalid_parameter("cr_residual needs t > 0 and r > 0");
  const double e = std::exp(-t * z);
  const double x = t * r;
  const double j0 = bessel_j0(x), j1 = bessel_j1(x);
  // d(r J1(tr) e)/dr via the product rule and J1' = J0 - J1/x.
  const double dpsi_dr = e * (j1 + x * (j0 - j1 / x));
  const double dphi_dz = -t * e * j0;
  const double dpsi_dz = -t * (r * j1 * e);
  const double dphi_dr = -t * j1 * e;
  return {dpsi_dr + r * dphi_dz, dpsi_dz - r * dphi_dr};
}

// Ring-kernel convolution form of the same half-space solution.  Each term
// integrates a stretched-plane kernel derivative against the boundary data:
//   u_r = (1/delta) [  k2 l2 (w1_d^1 * f1) - k1 l1 (w1_d^2 * f1)
//                      - (w0_r^1 * f2) + (w0_r^2 * f2) ]
//   u_z = (1/delta) [ -k1 l1 (w0_d^1 * f2) + k2 l2 (w0_d^2 * f2)
//                      + k1 k2 l1 l2 ((W1F^2 - W1F^1) * f1) ]
// with X^j evaluated at the field point (r, lambda_j z) against the source
// ring (a, 0), and * meaning int_0^rmax . f(a) a da.
inline Displacement convolution_displacement(const ElasticConstants& mat,
                                             const BoundaryData& data, double r, double z,
                                             std::size_t panels = 192) {
  if (!(z > 0.0) || !(r >= 0.0))
    throw err_invalid_parameter("convolution form needs r >= 0 and z > 0");
  const CharacteristicData cd = characteristic_data(mat);
  const double l[2] = {cd.lambda1, cd.lambda2};
  const double k[2] = {cd.k1, cd.k2};

  // Weighted integrals of the four kernel scalars per branch.
  double w1d[2] = {0.0, 0.0}, w0r[2] = {0.0, 0.0}, w0d[2] = {0.0, 0.0},
         w1f[2] = {0.0, 0.0};
  for (int j = 0; j < 2; ++j) {
    const FieldPoint p{r, l[j] * z};
    auto term = [&](double a, int which) {
      const RingPole q{a, 0.0};
      switch (which) {
        case 0:
          return w1_jet(p, q).d_z * data.f1(a) * a;
        case 1:
          return w0_jet(p, q).d_r * data.f2(a) * a;
        case 2:
          return w0_jet(p, q).d_z * data.f2(a) * a;
        default:
          return w1f_jet(p, q).value * data.f1(a) * a;
      }
    };
    for (int which = 0; which < 4; ++which) {
      double total = 0.0;
      for (std::size_t pp = 0; pp < panels; ++pp) {
        const double a0 = data.r_max() * static_cast<double>(pp) / static_cast<double>(panels);
        const double a1 =
            data.r_max() * static_cast<double>(pp + 1) / static_cast<double>(panels);
        total += detail::panel_gk15([&](double a) { return a > 0.0 ? term(a, which) : 0.0; },
                                    a0, a1);
      }
      (which == 0 ? w1d[j] : which == 1 ? w0r[j] : which == 2 ? w0d[j] : w1f[j]) = total;
    }
  }

  Displacement u;
  u.u_r = (k[1] * l[1] * w1d[0] - k[0] * l[0] * w1d[1] - w0r[0] + w0r[1]) / cd.delta;
  u.u_z = (-k[0] * l[0] * w0d[0] + k[1] * l[1] * w0d[1] +
           k[0] * k[1] * l[0] * l[1] * (w1f[1] - w1f[0])) /
          cd.delta;
  return u;
}

}  // namespace axibie
