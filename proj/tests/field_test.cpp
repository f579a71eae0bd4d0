#include "axibie/field.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "axibie/bie.hpp"
#include "axibie/contour.hpp"
#include "axibie/material.hpp"
#include "axibie/ring_kernels.hpp"

namespace {

using axibie::BieSystem;
using axibie::Contour;
using axibie::DensityPair;
using axibie::ElasticConstants;
using axibie::ManufacturedCase;

const ElasticConstants kRef{20.0, 5.0, 1.0, 2.0, 1.0};

struct Fixture {
  axibie::CharacteristicData cd;
  Contour torus;
  BieSystem sys;
  ManufacturedCase mc;

  explicit Fixture(int n)
      : cd(axibie::characteristic_data(kRef)),
        torus(Contour::torus(2.0, 1.0)),
        sys(axibie::assemble(torus, cd, n)),
        mc(axibie::manufactured_case({5.0, 0.0}, {1.0, 1.0}, sys, kRef)) {}
};

TEST(Field, ManufacturedTracesMatchFrozenFixture) {
  // Reference values for the standard verification case, frozen after an
  // independent finite-difference check of the node-0 trace.
  const Fixture s(16);
  struct Frozen {
    int j;
    double g1, g2;
  };
  const std::array<Frozen, 5> frozen{{
      {0, 0.039470553288019891, 0.0},
      {3, 0.0095325825668845475, -0.123126815820626},
      {5, 0.0058787074107068673, -0.09209232060933828},
      {8, 0.0083756383487129174, -1.1542478376097851e-17},
      {13, 0.009532582566884544, 0.12312681582062601},
  }};
  for (const auto& f : frozen) {
    EXPECT_NEAR(s.mc.g1[static_cast<std::size_t>(f.j)], f.g1, 1e-13 * std::abs(f.g1) + 1e-16)
        << "node " << f.j;
    EXPECT_NEAR(s.mc.g2[static_cast<std::size_t>(f.j)], f.g2, 1e-13 * std::abs(f.g2) + 1e-16)
        << "node " << f.j;
  }
  EXPECT_NEAR(s.mc.trace_sup, 0.12312681582062601, 1e-13);
  // Mirror symmetry of the trace about the source plane z = 0.
  EXPECT_NEAR(s.mc.g1[3], s.mc.g1[13], 1e-15);
  EXPECT_NEAR(s.mc.g2[3], -s.mc.g2[13], 1e-15);
}

TEST(Field, ManufacturedPotentialsSatisfyTheFieldEquations) {
  // Each branch potential phi_k(r,z) = w0(r, lambda_k z; a0, lambda_k z0)
  // must satisfy d_rr + (1/r) d_r + (1/lambda_k^2) d_zz = 0.
  const auto cd = axibie::characteristic_data(kRef);
  const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
  for (const auto& [r, z] : {std::pair{2.0, 0.0}, {2.5, 0.3}, {1.5, -0.4}, {2.0, 0.6}}) {
    for (int k = 0; k < 2; ++k) {
      const double lam = lambda[static_cast<std::size_t>(k)];
      const auto jet = axibie::w0_jet({r, lam * z}, {5.0, 0.0});
      const double residual = jet.d_rr + jet.d_r / r + jet.d_zz;
      const double scale = std::abs(jet.d_rr) + std::abs(jet.d_r / r) + std::abs(jet.d_zz);
      EXPECT_LE(std::abs(residual), 1e-8 * scale) << "branch " << k << " at (" << r << "," << z
                                                  << ")";
    }
  }
}

TEST(Field, ManufacturedRejectsBadPoles) {
  const Fixture s(16);
  EXPECT_THROW(axibie::manufactured_case({2.5, 0.3}, {1.0, 1.0}, s.sys, kRef),
               axibie::DomainError);
  // Outside but closer than a tenth of the contour scale.
  EXPECT_THROW(axibie::manufactured_case({3.05, 0.0}, {1.0, 1.0}, s.sys, kRef),
               axibie::DomainError);
  EXPECT_THROW(axibie::manufactured_case({-1.0, 0.0}, {1.0, 1.0}, s.sys, kRef),
               axibie::DomainError);
  const auto zero = axibie::manufactured_case({5.0, 0.0}, {0.0, 0.0}, s.sys, kRef);
  for (double v : zero.g1) EXPECT_DOUBLE_EQ(v, 0.0);
  for (double v : zero.g2) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Field, DisplacementMatchesOracleAtInteriorProbes) {
  const Fixture s(128);
  const DensityPair h = axibie::solve(s.sys, s.mc.g1, s.mc.g2);
  const std::array<std::pair<double, double>, 5> probes{
      std::pair{2.0, 0.0}, {2.5, 0.3}, {1.5, -0.4}, {2.0, 0.6}, {2.4, -0.5}};
  for (const auto& [r, z] : probes) {
    const auto got = axibie::displacement(s.sys, h, r, z);
    const auto want = s.mc.displacement(r, z);
    const double scale = std::max({std::abs(want.u_r), std::abs(want.u_z), 1e-30});
    EXPECT_NEAR(got.u.u_r, want.u_r, 1e-6 * scale) << "(" << r << "," << z << ")";
    EXPECT_NEAR(got.u.u_z, want.u_z, 1e-6 * scale) << "(" << r << "," << z << ")";
    EXPECT_FALSE(got.near_boundary);
  }
  // Points within five mesh widths carry the advisory flag but still match.
  const auto near = axibie::displacement(s.sys, h, 2.0, 0.93);
  EXPECT_TRUE(near.near_boundary);
  const auto want = s.mc.displacement(2.0, 0.93);
  EXPECT_NEAR(near.u.u_z, want.u_z, 1e-5 * std::abs(want.u_z));
}

TEST(Field, StressMatchesOracleAndSatisfiesEquilibrium) {
  const Fixture s(128);
  const DensityPair h = axibie::solve(s.sys, s.mc.g1, s.mc.g2);

  for (const auto& [r, z] : {std::pair{2.0, 0.5}, {2.5, 0.3}, {1.6, -0.3}}) {
    const auto got = axibie::stress(s.sys, h, kRef, r, z);
    ASSERT_TRUE(got.has_stress);
    const auto want = s.mc.stress(r, z);
    const double scale = std::max({std::abs(want.srr), std::abs(want.sphiphi),
                                   std::abs(want.szz), std::abs(want.srz)});
    EXPECT_NEAR(got.stress.szz, want.szz, 1e-4 * std::abs(want.szz)) << r << "," << z;
    EXPECT_NEAR(got.stress.srr, want.srr, 1e-4 * scale);
    EXPECT_NEAR(got.stress.sphiphi, want.sphiphi, 1e-4 * scale);
    EXPECT_NEAR(got.stress.srz, want.srz, 1e-4 * scale);
  }

  // Radial equilibrium d(srr)/dr + (srr - sphiphi)/r + d(srz)/dz = 0 by
  // centered differences of the evaluated stress field.
  const double r0 = 2.0, z0 = 0.5, step = 1e-3;
  const auto sp = axibie::stress(s.sys, h, kRef, r0 + step, z0);
  const auto sm = axibie::stress(s.sys, h, kRef, r0 - step, z0);
  const auto szp = axibie::stress(s.sys, h, kRef, r0, z0 + step);
  const auto szm = axibie::stress(s.sys, h, kRef, r0, z0 - step);
  const auto sc = axibie::stress(s.sys, h, kRef, r0, z0);
  const double residual = (sp.stress.srr - sm.stress.srr) / (2.0 * step) +
                          (sc.stress.srr - sc.stress.sphiphi) / r0 +
                          (szp.stress.srz - szm.stress.srz) / (2.0 * step);
  const double scale = std::max({std::abs(sc.stress.srr), std::abs(sc.stress.sphiphi),
                                 std::abs(sc.stress.szz), std::abs(sc.stress.srz)});
  EXPECT_LE(std::abs(residual), 1e-4 * scale);
}

TEST(Field, EvaluationIsLinearInDensities) {
  const Fixture s(32);
  DensityPair a, b;
  for (int j = 0; j < 32; ++j) {
    const double x = 2.0 * std::numbers::pi * j / 32;
    a.h1.push_back(std::sin(x));
    a.h2.push_back(std::cos(2.0 * x));
    b.h1.push_back(0.3 + std::cos(x));
    b.h2.push_back(std::sin(3.0 * x) - 0.1);
  }
  const double ca = 1.7, cb = -0.6;
  DensityPair mix;
  for (int j = 0; j < 32; ++j) {
    mix.h1.push_back(ca * a.h1[static_cast<std::size_t>(j)] + cb * b.h1[static_cast<std::size_t>(j)]);
    mix.h2.push_back(ca * a.h2[static_cast<std::size_t>(j)] + cb * b.h2[static_cast<std::size_t>(j)]);
  }
  for (const auto& [r, z] : {std::pair{2.0, 0.0}, {2.5, 0.3}, {1.5, -0.4}}) {
    const auto ua = axibie::displacement(s.sys, a, r, z);
    const auto ub = axibie::displacement(s.sys, b, r, z);
    const auto um = axibie::displacement(s.sys, mix, r, z);
    const double scale =
        std::max({std::abs(um.u.u_r), std::abs(um.u.u_z), std::abs(ua.u.u_r), 1.0});
    EXPECT_NEAR(um.u.u_r, ca * ua.u.u_r + cb * ub.u.u_r, 1e-12 * scale);
    EXPECT_NEAR(um.u.u_z, ca * ua.u.u_z + cb * ub.u.u_z, 1e-12 * scale);
  }
}

TEST(Field, RingKernelIsReciprocal) {
  // w0 is symmetric under exchange of field circle and source circle.
  for (const auto& [r, zz, a, zeta] :
       {std::tuple{1.0, 0.5, 2.0, -0.3}, {3.0, -1.0, 0.7, 0.2}, {2.2, 0.0, 2.2, 1.0}}) {
    const double ab = axibie::w0_value({r, zz}, {a, zeta});
    const double ba = axibie::w0_value({a, zeta}, {r, zz});
    EXPECT_NEAR(ab, ba, 1e-13 * std::abs(ab));
  }
}

TEST(Field, NearBoundaryValuesApproachTheData) {
  const Fixture s(64);
  const DensityPair h = axibie::solve(s.sys, s.mc.g1, s.mc.g2);
  const int node = 9;
  const auto& gn = s.sys.grid.nodes[node];
  const auto exact = s.mc.displacement(gn.r, gn.z);
  double prev = 0.0;
  int level = 0;
  for (const double eps : {4e-2, 2e-2, 1e-2}) {
    const double r = gn.r + eps * gn.phys.n1;
    const double z = gn.z + eps * gn.phys.n2;
    const auto u = axibie::displacement(s.sys, h, r, z);
    const double err =
        std::max(std::abs(u.u.u_r - exact.u_r), std::abs(u.u.u_z - exact.u_z));
    if (level > 0) EXPECT_LT(err, 0.7 * prev) << "eps " << eps;
    prev = err;
    ++level;
  }
}

TEST(Field, RejectsOutsideAndInconsistentInputs) {
  const Fixture s(16);
  const DensityPair h = axibie::solve(s.sys, s.mc.g1, s.mc.g2);
  EXPECT_THROW(axibie::displacement(s.sys, h, 0.5, 0.0), axibie::DomainError);
  EXPECT_THROW(axibie::displacement(s.sys, h, 3.0, 0.0), axibie::DomainError);
  EXPECT_THROW(axibie::displacement(s.sys, h, 2.0, 5.0), axibie::DomainError);
  DensityPair short_h;
  short_h.h1.assign(8, 0.0);
  short_h.h2.assign(8, 0.0);
  EXPECT_THROW(axibie::displacement(s.sys, short_h, 2.0, 0.0), axibie::ConfigError);
  const ElasticConstants other{21.0, 5.0, 1.0, 2.0, 1.0};
  EXPECT_THROW(axibie::stress(s.sys, h, other, 2.0, 0.0), axibie::ConfigError);

  // Zero densities give the zero field with stresses.
  DensityPair zero;
  zero.h1.assign(16, 0.0);
  zero.h2.assign(16, 0.0);
  const auto f = axibie::stress(s.sys, zero, kRef, 2.0, 0.3);
  EXPECT_DOUBLE_EQ(f.u.u_r, 0.0);
  EXPECT_DOUBLE_EQ(f.u.u_z, 0.0);
  EXPECT_DOUBLE_EQ(f.stress.szz, 0.0);
  EXPECT_DOUBLE_EQ(f.stress.srz, 0.0);
}

}  // namespace
