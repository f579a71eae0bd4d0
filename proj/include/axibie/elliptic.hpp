#pragma once

// Complete elliptic integrals K(m), E(m) in the *parameter* convention
// (m = k^2), together with first/second parameter-derivatives and the
// combination h(m) = ((2-m)K - 2E)/m that drives the J1*J1 ring kernel.
//
// Numerical design:
//  * The arithmetic-geometric mean is seeded with BOTH m and its complement
//    mc.  Callers that know the complement exactly (it is a ratio of two
//    positive geometric quantities) pass it in, so the notorious 1-m
//    cancellation near m=1 never happens inside this header.
//  * For small m the direct formulas for E', K'', h, ... lose digits to
//    cancellation, so every quantity has a Maclaurin branch with exact
//    rational term recurrences, switched at m = 0.5.

#include <cmath>
#include <numbers>

#include "axibie/errors.hpp"

namespace axibie {

struct EllipticKE {
  double K = 0.0;
  double E = 0.0;
};

namespace detail {

inline void check_m_mc(double m, double mc) {
  if (!(m >= 0.0) || !(mc > 0.0) || !std::isfinite(m) || !std::isfinite(mc))
    throw DomainError("elliptic parameter outside [0,1): m=" + std::to_string(m) +
                      " mc=" + std::to_string(mc));
}

}  // namespace detail

// K and E from the AGM; m and its complement mc are both taken as given.
inline EllipticKE elliptic_ke_pair(double m, double mc) {
  detail::check_m_mc(m, mc);
  const double pi = std::numbers::pi;
  if (m == 0.0) return {pi / 2.0, pi / 2.0};
  double a = 1.0;
  double b = std::sqrt(mc);
  double c = std::sqrt(m);
  double csum = 0.5 * c * c;  // 2^{n-1} c_n^2, n = 0 term
  double pow2 = 0.5;
  for (int it = 0; it < 60; ++it) {
    const double an = 0.5 * (a + b);
    const double cn = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    c = cn;
    pow2 *= 2.0;
    csum += pow2 * c * c;
    if (c < 1e-17 * a) break;
  }
  const double K = pi / (2.0 * a);
  const double E = K * (1.0 - csum);
  return {K, E};
}

// Convenience entry point for a bare parameter; complement formed here.
// Exact for m >= 0.5 (Sterbenz), and harmless below it.
inline EllipticKE elliptic_ke(double m) {
  if (!std::isfinite(m) || m < 0.0 || m >= 1.0)
    throw DomainError("elliptic_ke requires 0 <= m < 1, got m=" + std::to_string(m));
  return elliptic_ke_pair(m, 1.0 - m);
}

// --- derivative sets -------------------------------------------------------

struct EllipticDerivs {
  double K = 0.0, E = 0.0;    // values
  double Kp = 0.0, Ep = 0.0;  // d/dm
  double Kpp = 0.0, Epp = 0.0;
};

namespace detail {

// Maclaurin coefficients alpha_n = [(2n-1)!!/(2n)!!]^2 via the stable
// recurrence alpha_n = alpha_{n-1} ((2n-1)/(2n))^2.
inline EllipticDerivs elliptic_derivs_series(double m) {
  const double pi2 = std::numbers::pi / 2.0;
  double alpha = 1.0;      // alpha_0
  double pw = 1.0;         // m^{n-1} inside the loop
  double pw_prev = 0.0;    // m^{n-2}
  double sK = 1.0, sE = 1.0, sKp = 0.0, sEp = 0.0, sKpp = 0.0, sEpp = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double f = (2.0 * n - 1.0) / (2.0 * n);
    alpha *= f * f;
    const double tK = alpha * pw * m;   // alpha_n m^n
    const double tKp = alpha * pw * n;  // n alpha_n m^{n-1}
    sK += tK;
    sE -= tK / (2.0 * n - 1.0);
    sKp += tKp;
    sEp -= tKp / (2.0 * n - 1.0);
    if (n >= 2) {
      const double tKpp = alpha * n * (n - 1.0) * pw_prev;  // n(n-1) alpha_n m^{n-2}
      sKpp += tKpp;
      sEpp -= tKpp / (2.0 * n - 1.0);
    }
    pw_prev = pw;
    pw *= m;
    if (tK < 1e-18 * sK && n > 4) break;
  }
  EllipticDerivs d;
  d.K = pi2 * sK;
  d.E = pi2 * sE;
  d.Kp = pi2 * sKp;
  d.Ep = pi2 * sEp;
  d.Kpp = pi2 * sKpp;
  d.Epp = pi2 * sEpp;
  return d;
}

}  // namespace detail

inline EllipticDerivs elliptic_derivs(double m, double mc) {
  detail::check_m_mc(m, mc);
  if (m < 0.5) return detail::elliptic_derivs_series(m);
  const auto [K, E] = elliptic_ke_pair(m, mc);
  EllipticDerivs d;
  d.K = K;
  d.E = E;
  d.Kp = (E - mc * K) / (2.0 * m * mc);
  d.Ep = (E - K) / (2.0 * m);
  // From the hypergeometric ODE m(1-m)K'' + (1-2m)K' - K/4 = 0.
  d.Kpp = (K / 4.0 - (1.0 - 2.0 * m) * d.Kp) / (m * mc);
  d.Epp = -(d.Ep + d.Kp) / (2.0 * m);
  return d;
}

// --- h(m) = ((2-m)K - 2E)/m ------------------------------------------------

struct HSet {
  double h = 0.0, hp = 0.0, hpp = 0.0;
};

namespace detail {

// h = (pi/2) sum_{n>=1} g_{n+1} m^n with g_n = alpha_n 4n/(2n-1) - alpha_{n-1};
// the n=1 coefficient of the raw numerator cancels exactly (g_1 = 0), which is
// precisely the cancellation the direct formula suffers from at small m.
inline HSet h_set_series(double m) {
  const double pi2 = std::numbers::pi / 2.0;
  double alpha = 0.25;   // alpha_1
  double pw = 1.0;       // m^{n-1} inside the loop
  double pw_prev = 0.0;  // m^{n-2}
  double sh = 0.0, shp = 0.0, shpp = 0.0;
  for (int n = 1; n <= 200; ++n) {
    // g_{n+1} built from alpha_{n+1} and alpha_n.
    const int np = n + 1;
    const double f = (2.0 * np - 1.0) / (2.0 * np);
    const double alpha_next = alpha * f * f;  // alpha_{n+1}
    const double g = alpha_next * 4.0 * np / (2.0 * np - 1.0) - alpha;
    const double t = g * pw * m;  // g_{n+1} m^n
    sh += t;
    shp += g * pw * n;
    if (n >= 2) shpp += g * n * (n - 1.0) * pw_prev;
    alpha = alpha_next;
    pw_prev = pw;
    pw *= m;
    if (std::abs(t) < 1e-18 * std::abs(sh) && n > 4) break;
  }
  return {pi2 * sh, pi2 * shp, pi2 * shpp};
}

}  // namespace detail

inline HSet h_set(double m, double mc) {
  detail::check_m_mc(m, mc);
  if (m <= 0.5) return detail::h_set_series(m);
  const auto d = elliptic_derivs(m, mc);
  HSet s;
  s.h = ((2.0 - m) * d.K - 2.0 * d.E) / m;
  const double Fp = -d.K + (2.0 - m) * d.Kp - 2.0 * d.Ep;
  s.hp = (Fp - s.h) / m;
  const double Fpp = -2.0 * d.Kp + (2.0 - m) * d.Kpp - 2.0 * d.Epp;
  s.hpp = (Fpp - 2.0 * s.hp) / m;
  return s;
}

inline double h_of(double m, double mc) { return h_set(m, mc).h; }

// --- logarithmic-splitting coefficient helpers -----------------------------
//
// Near m -> 1 the integrals behave like  K(m) = P(mc) L + (smooth),
// E(m) = PE(mc) L + (smooth)  with  L = ln(1/sqrt(mc)),  P(x) = (2/pi) K(x)
// and  PE(x) = (2/pi)(K(x) - E(x)).  The ratio PE(x)/x appears in the
// log-coefficients of the kernel derivatives and needs a series branch.

inline double p_coeff(double x, double xc) {  // (2/pi) K(parameter x)
  return (2.0 / std::numbers::pi) * elliptic_ke_pair(x, xc).K;
}

inline double e_param(double x, double xc) {  // E(parameter x)
  return elliptic_ke_pair(x, xc).E;
}

inline double pe_over(double x, double xc) {  // (2/pi)(K(x)-E(x))/x
  detail::check_m_mc(x, xc);
  if (x > 0.5) {
    const auto [K, E] = elliptic_ke_pair(x, xc);
    return (2.0 / std::numbers::pi) * (K - E) / x;
  }
  // (2/pi)(K-E)/x = sum_{n>=1} alpha_n (2n/(2n-1)) x^{n-1}
  double alpha = 1.0;
  double xn = 1.0;
  double s = 0.0;
  for (int n = 1; n <= 200; ++n) {
    const double f = (2.0 * n - 1.0) / (2.0 * n);
    alpha *= f * f;
    const double t = alpha * (2.0 * n / (2.0 * n - 1.0)) * xn;
    s += t;
    xn *= x;
    if (t < 1e-18 * s && n > 4) break;
  }
  return s;
}

}  // namespace axibie
