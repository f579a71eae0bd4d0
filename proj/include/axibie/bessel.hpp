#pragma once

// Bessel functions J0 and J1 on x >= 0, accurate to ~1e-13 absolute across
// the working range, plus locators for their positive zeros (used to build
// oscillation-aware panels for Hankel-transform quadrature).
//
// x <= 16: Maclaurin series in extended precision (the largest term at x=16
// is ~2e5, so 80-bit accumulation keeps the absolute error near 1e-14).
// x > 16: Hankel asymptotic expansion with optimal truncation.

#include <cmath>
#include <numbers>

#include "axibie/errors.hpp"

namespace axibie {

namespace detail {

inline double j_series(int nu, double x) {
  const long double hx = 0.5L * static_cast<long double>(x);
  const long double q = -hx * hx;
  long double term = (nu == 0) ? 1.0L : hx;
  long double sum = term;
  for (int k = 1; k <= 120; ++k) {
    term *= q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(static_cast<double>(term)) < 1e-20 * (1.0 + std::abs(static_cast<double>(sum))) &&
        k > 4)
      break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
// chi = x - (2 nu + 1) pi / 4, with the a_k recurrence
// a_{k+1} = a_k (mu - (2k+1)^2) / (8 (k+1)),  mu = 4 nu^2.
inline double j_asymptotic(int nu, double x) {
  const long double mu = 4.0L * nu * nu;
  const long double ix = 1.0L / static_cast<long double>(x);
  long double a = 1.0L;    // a_k
  long double ixk = 1.0L;  // x^{-k}
  long double P = 0.0L, Q = 0.0L;
  long double prev_mag = 1e300L;
  for (int k = 0; k < 40; ++k) {
    const long double contrib = a * ixk;
    const long double mag = std::abs(static_cast<double>(contrib));
    if (mag > prev_mag) break;  // optimal truncation of the divergent tail
    prev_mag = mag;
    const int r = k % 4;
    if (r == 0)
      P += contrib;
    else if (r == 1)
      Q += contrib;
    else if (r == 2)
      P -= contrib;
    else
      Q -= contrib;
    a *= (mu - (2.0L * k + 1.0L) * (2.0L * k + 1.0L)) / (8.0L * (k + 1.0L));
    ixk *= ix;
    if (mag < 1e-20L) break;
  }
  const long double chi =
      static_cast<long double>(x) - (2.0L * nu + 1.0L) * std::numbers::pi_v<long double> / 4.0L;
  const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
  return static_cast<double>(amp * (P * std::cos(chi) - Q * std::sin(chi)));
}

}  // namespace detail

inline double bessel_j0(double x) {
  if (!std::isfinite(x)) throw err_non_finite("bessel_j0 argument");
  x = std::abs(x);
  return (x <= 16.0) ? detail::j_series(0, x) : detail::j_asymptotic(0, x);
}

inline double bessel_j1(double x) {
  if (!std::isfinite(x)) throw err_non_finite("bessel_j1 argument");
  const double s = (x < 0.0) ? -1.0 : 1.0;
  x = std::abs(x);
  return s * ((x <= 16.0) ? detail::j_series(1, x) : detail::j_asymptotic(1, x));
}

struct BesselPair {
  double j0 = 0.0;
  double j1 = 0.0;
};

inline BesselPair bessel_j01(double x) { return {bessel_j0(x), bessel_j1(x)}; }

// --- positive zeros --------------------------------------------------------

// n-th positive zero (n >= 1) of J_nu via the McMahon expansion refined by
// Newton iterations (J0' = -J1, J1' = J0 - J1/x).
inline double bessel_zero(int nu, int n) {
  if (nu != 0 && nu != 1) throw err_invalid_parameter("bessel_zero supports nu in {0,1}");
  if (n < 1) throw err_invalid_parameter("bessel_zero requires n >= 1");
  const double pi = std::numbers::pi;
  const double beta = (n + 0.5 * nu - 0.25) * pi;
  const double mu = 4.0 * nu * nu;
  const double b2 = 8.0 * beta;
  double x = beta - (mu - 1.0) / b2 -
             4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b2 * b2 * b2);
  for (int it = 0; it < 6; ++it) {
    const auto [j0, j1] = bessel_j01(x);
    double f, fp;
    if (nu == 0) {
      f = j0;
      fp = -j1;
    } else {
      f = j1;
      fp = j0 - j1 / x;
    }
    const double dx = f / fp;
    x -= dx;
    if (std::abs(dx) < 1e-15 * x) break;
  }
  return x;
}

inline double j0_zero(int n) { return bessel_zero(0, n); }
inline double j1_zero(int n) { return bessel_zero(1, n); }

}  // namespace axibie
