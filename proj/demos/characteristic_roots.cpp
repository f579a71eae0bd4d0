// Minimal library walkthrough: elastic constants -> characteristic data.
//
// The five constants of a transversely isotropic solid determine two
// quasi-harmonic potential branches; each branch carries a stretch lambda_j
// and a displacement coupling k_j.  Everything downstream (kernels, solver,
// fields) consumes the CharacteristicData computed here.

#include <cstdio>

#include "axibie/axibie.hpp"

int main() {
  // Reference material used throughout the test-suite.
  const axibie::ElasticConstants m{20.0, 5.0, 1.0, 2.0, 1.0};
  const axibie::CharacteristicData cd = axibie::characteristic_data(m);

  std::printf("material: a11=%g a12=%g a13=%g a33=%g a44=%g\n", m.a11, m.a12, m.a13, m.a33,
              m.a44);
  std::printf("  mu1 = %.15g   mu2 = %.15g\n", cd.lambda1 * cd.lambda1, cd.lambda2 * cd.lambda2);
  std::printf("  lambda1 = %.15g   lambda2 = %.15g\n", cd.lambda1, cd.lambda2);
  std::printf("  k1 = %.15g   k2 = %.15g\n", cd.k1, cd.k2);
  std::printf("  delta = k1 lambda1 - k2 lambda2 = %.15g\n", cd.delta);

  // Materials whose characteristic roots leave the admissible class are
  // rejected with a typed DomainError instead of producing garbage fields.
  const axibie::ElasticConstants bad{4.0, 3.0, 2.5, 2.0, 1.0};
  try {
    (void)axibie::characteristic_data(bad);
  } catch (const axibie::DomainError& e) {
    std::printf("rejected (4,3,2.5,2,1): %s\n", e.what());
  }
  return 0;
}
