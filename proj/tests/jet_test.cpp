#include "axibie/jet.hpp"

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

namespace {

using axibie::Jet2;

// Evaluate a jet-valued expression at (r, z).
Jet2 sample_expr(double r, double z) {
  const Jet2 jr = Jet2::var_r(r);
  const Jet2 jz = Jet2::var_z(z);
  // f = sqrt(r^2 + z^2) / (1 + r z) + log(2 + r)
  return sqrt(jr * jr + jz * jz) / (1.0 + jr * jz) + log(jr + 2.0);
}

double sample_scalar(double r, double z) {
  return std::sqrt(r * r + z * z) / (1.0 + r * z) + std::log(2.0 + r);
}

TEST(Jet2, MatchesCentralDifferences) {
  const double r = 1.3, z = 0.7, h = 1e-5;
  const Jet2 j = sample_expr(r, z);
  EXPECT_NEAR(j.v, sample_scalar(r, z), 1e-15);

  const double fr = (sample_scalar(r + h, z) - sample_scalar(r - h, z)) / (2 * h);
  const double fz = (sample_scalar(r, z + h) - sample_scalar(r, z - h)) / (2 * h);
  EXPECT_NEAR(j.dr, fr, 1e-9);
  EXPECT_NEAR(j.dz, fz, 1e-9);

  const double frr =
      (sample_scalar(r + h, z) - 2 * sample_scalar(r, z) + sample_scalar(r - h, z)) / (h * h);
  const double fzz =
      (sample_scalar(r, z + h) - 2 * sample_scalar(r, z) + sample_scalar(r, z - h)) / (h * h);
  const double frz = (sample_scalar(r + h, z + h) - sample_scalar(r + h, z - h) -
                      sample_scalar(r - h, z + h) + sample_scalar(r - h, z - h)) /
                     (4 * h * h);
  EXPECT_NEAR(j.drr, frr, 1e-5);
  EXPECT_NEAR(j.dzz, fzz, 1e-5);
  EXPECT_NEAR(j.drz, frz, 1e-5);
}

TEST(Jet2, CompositionChainRule) {
  // cos(g) with g = r^2 z via the (f, f', f'') hook.
  const double r = 0.9, z = -1.4;
  const Jet2 g = Jet2::var_r(r) * Jet2::var_r(r) * Jet2::var_z(z);
  const Jet2 c = axibie::compose(std::cos(g.v), -std::sin(g.v), -std::cos(g.v), g);
  EXPECT_NEAR(c.v, std::cos(r * r * z), 1e-15);
  EXPECT_NEAR(c.dr, -std::sin(r * r * z) * 2 * r * z, 1e-13);
  EXPECT_NEAR(c.dz, -std::sin(r * r * z) * r * r, 1e-13);
  const double drr_exact = -std::cos(r * r * z) * (2 * r * z) * (2 * r * z) -
                           std::sin(r * r * z) * 2 * z;
  EXPECT_NEAR(c.drr, drr_exact, 1e-12);
}

TEST(Jet2, GuardsInvalidOperations) {
  EXPECT_THROW(axibie::recip(Jet2::constant(0.0)), axibie::DomainError);
  EXPECT_THROW(axibie::sqrt(Jet2::constant(-1.0)), axibie::DomainError);
  EXPECT_THROW(axibie::log(Jet2::constant(0.0)), axibie::DomainError);
}

}  // namespace
