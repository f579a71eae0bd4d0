#pragma once

// Transversely isotropic elastic constants and the characteristic data of the
// axisymmetric displacement representation.
//
// Hooke's law in cylindrical components (axisymmetric, torsion-free):
//   sigma_rr   = a11 du_r/dr + a12 u_r/r + a13 du_z/dz
//   sigma_phi  = a12 du_r/dr + a11 u_r/r + a13 du_z/dz
//   sigma_zz   = a13 (du_r/dr + u_r/r) + a33 du_z/dz
//   sigma_rz   = a44 (du_r/dz + du_z/dr)
//
// The displacement ansatz u_r = d(phi1 + phi2)/dr, u_z = k1 dphi1/dz +
// k2 dphi2/dz, with phi_j solving d_rr + (1/r) d_r + (1/lambda_j^2) d_zz = 0,
// requires lambda_j^2 = mu_j to be the roots of
//   a33 a44 mu^2 + (a13 (a13 + 2 a44) - a11 a44) mu + a11 a44 = 0
// and fixes k_j = (a11 - a44 mu_j) / (mu_j (a13 + a44)).  The quantity
// delta = k1 lambda1 - k2 lambda2 scales every boundary-to-field map and must
// stay away from zero.

#include <cmath>

#include "axibie/errors.hpp"

namespace axibie {

struct ElasticConstants {
  double a11 = 0.0, a12 = 0.0, a13 = 0.0, a33 = 0.0, a44 = 0.0;
};

// Meridian displacement components.
struct Displacement {
  double u_r = 0.0, u_z = 0.0;
};

inline void validate(const ElasticConstants& m) {
  for (double v : {m.a11, m.a12, m.a13, m.a33, m.a44})
    if (!std::isfinite(v)) throw err_non_finite("elastic constants must be finite");
  // Positive definiteness of the stored-energy form.
  if (!(m.a44 > 0.0) || !(m.a11 > std::abs(m.a12)) ||
      !((m.a11 + m.a12) * m.a33 > 2.0 * m.a13 * m.a13))
    throw err_not_positive_definite(
        "requires a44 > 0, a11 > |a12|, (a11 + a12) a33 > 2 a13^2");
}

struct CharacteristicData {
  double lambda1 = 0.0, lambda2 = 0.0;  // lambda1 > lambda2 > 0
  double k1 = 0.0, k2 = 0.0;
  double delta = 0.0;  // k1 lambda1 - k2 lambda2
};

// Residual of the characteristic quadratic at mu = lambda^2; the natural
// scale of its coefficients is a11 * a44.
inline double characteristic_residual(const ElasticConstants& m, double mu) {
  const double b = m.a13 * (m.a13 + 2.0 * m.a44) - m.a11 * m.a33;
  return std::abs((m.a33 * m.a44 * mu + b) * mu + m.a11 * m.a44);
}

inline CharacteristicData characteristic_data(const ElasticConstants& m) {
  validate(m);
  const double a = m.a33 * m.a44;
  const double b = m.a13 * (m.a13 + 2.0 * m.a44) - m.a11 * m.a33;
  const double c = m.a11 * m.a44;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0)
    throw err_complex_roots("characteristic exponents form a complex pair");
  // Cancellation-free quadratic roots.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  const double mu_a = q / a, mu_b = c / q;
  if (!(mu_a > 0.0) || !(mu_b > 0.0))
    throw err_complex_roots("characteristic exponents are not real");
  const double mu1 = std::max(mu_a, mu_b), mu2 = std::min(mu_a, mu_b);

  CharacteristicData cd;
  cd.lambda1 = std::sqrt(mu1);
  cd.lambda2 = std::sqrt(mu2);
  if (cd.lambda1 - cd.lambda2 < 1e-8 * cd.lambda1)
    throw err_degenerate_roots("characteristic exponents coincide");

  const double den = m.a13 + m.a44;
  if (std::abs(den) < 1e-14 * (std::abs(m.a13) + m.a44))
    throw err_degenerate_roots("a13 + a44 = 0 leaves the representation undefined");
  cd.k1 = (m.a11 - m.a44 * mu1) / (mu1 * den);
  cd.k2 = (m.a11 - m.a44 * mu2) / (mu2 * den);
  cd.delta = cd.k1 * cd.lambda1 - cd.k2 * cd.lambda2;
  if (std::abs(cd.delta) < 1e-10 * std::abs(cd.k1 * cd.lambda1))
    throw err_zero_delta("k1 lambda1 - k2 lambda2 vanishes");
  return cd;
}

// --- stress assembly --------------------------------------------------------

// Displacement-gradient state at one point; ur_over_r must be supplied as
// du_r/dr when evaluating on the axis (the caller resolves the 0/0 limit).
struct DisplacementGradientSample {
  double dur_dr = 0.0;     // du_r/dr
  double ur_over_r = 0.0;  // u_r / r
  double duz_dz = 0.0;     // du_z/dz
  double dur_dz = 0.0;     // du_r/dz
  double duz_dr = 0.0;     // du_z/dr
};

struct StressSample {
  double srr = 0.0, sphiphi = 0.0, szz = 0.0, srz = 0.0;
};

inline StressSample stresses_from_fields(const ElasticConstants& m, const CharacteristicData&,
                                         const DisplacementGradientSample& du) {
  for (double v : {du.dur_dr, du.ur_over_r, du.duz_dz, du.dur_dz, du.duz_dr}) {
    if (!std::isfinite(v)) throw err_non_finite("displacement gradient component");
  }
  StressSample s;
  s.srr = m.a11 * du.dur_dr + m.a12 * du.ur_over_r + m.a13 * du.duz_dz;
  s.sphiphi = m.a12 * du.dur_dr + m.a11 * du.ur_over_r + m.a13 * du.duz_dz;
  s.szz = m.a13 * (du.dur_dr + du.ur_over_r) + m.a33 * du.duz_dz;
  s.srz = m.a44 * (du.dur_dz + du.duz_dr);
  return s;
}

// Coefficients of the potential route: with phi_j quasi-harmonic,
//   sigma_zz = sum_j (a33 k_j - a13 / mu_j) d_zz phi_j
//   sigma_rz = sum_j a44 (1 + k_j) d_rz phi_j
// (physical-z derivatives).
inline double szz_coefficient(const ElasticConstants& m, const CharacteristicData& cd,
                              int branch) {
  const double k = branch == 0 ? cd.k1 : cd.k2;
  const double lam = branch == 0 ? cd.lambda1 : cd.lambda2;
  return m.a33 * k - m.a13 / (lam * lam);
}

inline double srz_coefficient(const ElasticConstants& m, const CharacteristicData& cd,
                              int branch) {
  const double k = branch == 0 ? cd.k1 : cd.k2;
  return m.a44 * (1.0 + k);
}

}  // namespace axibie
