#include "axibie/halfplane.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace {

using axibie::BoundaryData;
using axibie::CharacteristicData;
using axibie::Displacement;
using axibie::ElasticConstants;

const ElasticConstants kRef{20.0, 5.0, 1.0, 2.0, 1.0};

TEST(HalfPlane, SingleModeBoundaryRoundtrip) {
  // A spectral line {t0, c1, c2} must restrict on z = 0 to
  // u_r = t0 c1 J1(t0 r), u_z = t0 c2 J0(t0 r): the branch combination
  // telescopes exactly.
  const auto cd = axibie::characteristic_data(kRef);
  const double t0 = 1.7, c1 = 0.8, c2 = -0.45;
  const axibie::HalfPlaneSolution sol(kRef, cd, axibie::SpectralData::line(t0, c1, c2));
  for (double r : {0.0, 0.3, 1.0, 2.2, 4.9}) {
    const Displacement u = sol.displacement(r, 0.0);
    const double ur_exact = t0 * c1 * axibie::bessel_j1(t0 * r);
    const double uz_exact = t0 * c2 * axibie::bessel_j0(t0 * r);
    EXPECT_NEAR(u.u_r, ur_exact, 1e-8 * (1.0 + std::abs(ur_exact)));
    EXPECT_NEAR(u.u_z, uz_exact, 1e-8 * (1.0 + std::abs(uz_exact)));
  }
}

TEST(HalfPlane, PureBranchMatchesModeFields) {
  // Choosing f2h = k1 l1 f1h kills the second branch; the interior field is
  // then the closed-form single-branch mode.
  const auto cd = axibie::characteristic_data(kRef);
  const double t0 = 2.1, f1h = 0.6;
  const axibie::HalfPlaneSolution sol(
      kRef, cd, axibie::SpectralData::line(t0, f1h, cd.k1 * cd.lambda1 * f1h));
  const double amp = -f1h / t0;
  for (double r : {0.2, 1.1, 3.0}) {
    for (double z : {0.1, 0.8, 2.0}) {
      const Displacement u = sol.displacement(r, z);
      const Displacement m = axibie::mode_fields(t0, cd.lambda1, cd.k1, amp, r, z);
      EXPECT_NEAR(u.u_r, m.u_r, 1e-14 + 1e-13 * std::abs(m.u_r));
      EXPECT_NEAR(u.u_z, m.u_z, 1e-14 + 1e-13 * std::abs(m.u_z));
    }
  }
}

TEST(HalfPlane, ModeSatisfiesRadialEquilibrium) {
  // d(srr)/dr + d(srz)/dz + (srr - sphiphi)/r == 0, with stresses assembled
  // by Hooke's law from the analytic mode displacements.  Checked with
  // central differences of the stress components.
  const auto cd = axibie::characteristic_data(kRef);
  auto stress_at = [&](double lam, double k, double r, double z) {
    const double t = 1.3, amp = 0.9, h = 1e-5;
    auto u = [&](double rr, double zz) { return axibie::mode_fields(t, lam, k, amp, rr, zz); };
    axibie::DisplacementGradientSample e;
    e.dur_dr = (u(r + h, z).u_r - u(r - h, z).u_r) / (2 * h);
    e.ur_over_r = u(r, z).u_r / r;
    e.duz_dz = (u(r, z + h).u_z - u(r, z - h).u_z) / (2 * h);
    e.dur_dz = (u(r, z + h).u_r - u(r, z - h).u_r) / (2 * h);
    e.duz_dr = (u(r + h, z).u_z - u(r - h, z).u_z) / (2 * h);
    return axibie::stresses_from_fields(kRef, cd, e);
  };
  for (int branch = 0; branch < 2; ++branch) {
    const double lam = branch == 0 ? cd.lambda1 : cd.lambda2;
    const double k = branch == 0 ? cd.k1 : cd.k2;
    for (const auto [r, z] : {std::pair{0.7, 0.5}, {1.8, 1.1}, {3.2, 0.2}}) {
      const double h = 1e-4;
      const auto sp = stress_at(lam, k, r + h, z);
      const auto sm = stress_at(lam, k, r - h, z);
      const auto szp = stress_at(lam, k, r, z + h);
      const auto szm = stress_at(lam, k, r, z - h);
      const auto s0 = stress_at(lam, k, r, z);
      const double resid = (sp.srr - sm.srr) / (2 * h) + (szp.srz - szm.srz) / (2 * h) +
                           (s0.srr - s0.sphiphi) / r;
      const double scale = std::abs(s0.srr) + std::abs(s0.srz) + std::abs(s0.szz) + 1e-12;
      EXPECT_LE(std::abs(resid) / scale, 2e-4) << "branch=" << branch << " r=" << r;
    }
  }
}

TEST(HalfPlane, StressTwoRoutesAgreeOnMode) {
  // sigma_zz via Hooke from mode strains equals the potential-route
  // coefficient (a33 k - a13/mu) against d_zz phi, and likewise sigma_rz =
  // a44 (1 + k) d_rz phi with phi = amp t e^{-t lam z} J0(t r).
  const auto cd = axibie::characteristic_data(kRef);
  const double t = 1.6, amp = 1.2;
  for (int branch = 0; branch < 2; ++branch) {
    const double lam = branch == 0 ? cd.lambda1 : cd.lambda2;
    const double k = branch == 0 ? cd.k1 : cd.k2;
    for (const auto [r, z] : {std::pair{0.8, 0.6}, {2.4, 1.5}}) {
      const double e = std::exp(-t * lam * z);
      const double j0 = axibie::bessel_j0(t * r), j1 = axibie::bessel_j1(t * r);
      // Analytic strains of the mode.
      axibie::DisplacementGradientSample st;
      const double durdr = -amp * t * t * t * e * (j0 - j1 / (t * r));
      st.dur_dr = durdr;
      st.ur_over_r = -amp * t * t * e * j1 / r;
      st.duz_dz = k * lam * lam * amp * t * t * t * e * j0;
      st.dur_dz = amp * t * t * t * lam * e * j1;
      st.duz_dr = k * lam * amp * t * t * t * e * j1;
      const auto s = axibie::stresses_from_fields(kRef, cd, st);
      // Potential route.
      const double phi_zz = amp * t * t * t * lam * lam * e * j0;
      const double phi_rz = amp * t * t * t * lam * e * j1;
      const double szz_pot = axibie::szz_coefficient(kRef, cd, branch) * phi_zz;
      const double srz_pot = axibie::srz_coefficient(kRef, cd, branch) * phi_rz;
      EXPECT_NEAR(s.szz, szz_pot, 1e-12 * (1.0 + std::abs(szz_pot)));
      EXPECT_NEAR(s.srz, srz_pot, 1e-12 * (1.0 + std::abs(srz_pot)));
    }
  }
}

TEST(HalfPlane, CauchyRiemannResiduals) {
  std::mt19937 rng(0xC0FFEEu);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double t = 0.2 + 4.0 * U(rng);
    const double r = 0.1 + 5.0 * U(rng);
    const double z = 2.0 * U(rng);
    const auto res = axibie::cr_residual(t, r, z);
    const double scale =
        t * r * std::exp(-t * z) * (std::abs(axibie::bessel_j0(t * r)) +
                                    std::abs(axibie::bessel_j1(t * r))) +
        1e-30;
    EXPECT_LE(std::abs(res[0]) / scale, 1e-12) << "t=" << t << " r=" << r;
    EXPECT_LE(std::abs(res[1]) / scale, 1e-12) << "t=" << t << " r=" << r;
  }
}

TEST(HalfPlane, GaussianBoundaryRecovery) {
  auto g1 = [](double r) { return r * std::exp(-r * r); };
  auto g2 = [](double r) { return std::exp(-r * r); };
  const auto bd = BoundaryData::from_functions(g1, g2, 9.0, 384);
  const auto sol = axibie::halfplane_solve(kRef, bd, {20.0, 256});
  double sup = 0.0;
  for (double r : {0.0, 0.25, 0.6, 1.0, 1.4, 1.9, 2.5, 3.2}) {
    const Displacement u = sol.boundary_trace(r, 0.04);
    sup = std::max(sup, std::abs(u.u_r - g1(r)));
    sup = std::max(sup, std::abs(u.u_z - g2(r)));
  }
  EXPECT_LE(sup, 1e-4);
}

TEST(HalfPlane, ConvolutionFormMatchesSpectralForm) {
  auto g1 = [](double r) { return r * std::exp(-r * r); };
  auto g2 = [](double r) { return std::exp(-r * r); };
  const auto bd = BoundaryData::from_functions(g1, g2, 9.0, 384);
  const auto sol = axibie::halfplane_solve(kRef, bd, {20.0, 256});
  for (const auto [r, z] : {std::pair{0.0, 0.5}, {0.5, 0.3}, {1.0, 1.0}, {2.0, 0.7},
                            {3.5, 1.6}}) {
    const Displacement us = sol.displacement(r, z);
    const Displacement uc = axibie::convolution_displacement(kRef, bd, r, z);
    EXPECT_NEAR(uc.u_r, us.u_r, 1e-5) << "r=" << r << " z=" << z;
    EXPECT_NEAR(uc.u_z, us.u_z, 1e-5) << "r=" << r << " z=" << z;
  }
}

TEST(HalfPlane, RejectsBadInputsAndUndecayedData) {
  const auto cd = axibie::characteristic_data(kRef);
  const axibie::HalfPlaneSolution sol(kRef, cd, axibie::SpectralData::line(1.0, 1.0, 0.0));
  EXPECT_THROW(sol.displacement(-0.1, 0.5), axibie::DomainError);
  EXPECT_THROW(sol.displacement(1.0, -0.5), axibie::DomainError);
  EXPECT_THROW(sol.boundary_trace(1.0, 0.0), axibie::DomainError);
  EXPECT_THROW(axibie::mode_fields(0.0, 1.0, 1.0, 1.0, 1.0, 1.0), axibie::DomainError);
  EXPECT_THROW(axibie::cr_residual(1.0, 0.0, 1.0), axibie::DomainError);

  const auto flat = BoundaryData::from_functions([](double) { return 1.0; },
                                                 [](double) { return 1.0; }, 8.0, 32);
  EXPECT_THROW(axibie::halfplane_solve(kRef, flat), axibie::DomainError);
}

}  // namespace
