#pragma once

// Radial boundary data and its Hankel-transform representation.
//
// BoundaryData interpolates sampled profiles (f1, f2) on [0, r_max] with
// natural cubic splines and treats them as zero beyond r_max; check_decay
// guards against truncating profiles that have not died off.
//
// spectral_transform computes
//   f1h(t) = int_0^rmax f1(a) J1(t a) a da
//   f2h(t) = int_0^rmax f2(a) J0(t a) a da
// on a composite Gauss-Legendre t-grid, packaged together with the t-weights
// so that downstream evaluators can approximate any integral
// int_0^tmax g(t, f1h(t), f2h(t)) dt by a weighted sum over the grid.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "axibie/bessel.hpp"
#include "axibie/errors.hpp"

namespace axibie {

namespace detail {

// Tridiagonal solve (Thomas algorithm) for natural cubic spline moments.
inline std::vector<double> natural_spline_moments(const std::vector<double>& x,
                                                  const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    diag[i - 1] = (h0 + h1) / 3.0;
    upper[i - 1] = h1 / 6.0;
    rhs[i - 1] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < diag.size(); ++i) {
    const double w = upper[i - 1] / diag[i - 1];  // lower == upper (symmetric)
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = diag.size(); i-- > 0;) {
    const double carry = i + 1 < diag.size() ? upper[i] * m[i + 2] : 0.0;
    m[i + 1] = (rhs[i] - carry) / diag[i];
  }
  return m;
}

class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), m_(natural_spline_moments(x_, y_)) {}

  double operator()(double t) const {
    if (t <= x_.front()) return y_.front();
    if (t >= x_.back()) return y_.back();
    std::size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x_[mid] <= t ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double u = (t - x_[lo]) / h, um = 1.0 - u;
    return um * y_[lo] + u * y_[lo + 1] +
           (h * h / 6.0) *
               ((um * um * um - um) * m_[lo] + (u * u * u - u) * m_[lo + 1]);
  }

 private:
  std::vector<double> x_, y_;
  std::vector<double> m_;
};

// 15-point Gauss-Kronrod abscissae/weights on [-1, 1] (Kronrod extension of
// G7), used as a fixed high-order panel rule.
inline constexpr std::array<double, 15> kGk15X = {
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.2077849550078985, 0.0,                 0.2077849550078985,
    0.4058451513773972,  0.5860872354676911,  0.7415311855993945,
    0.8648644233597691,  0.9491079123427585,  0.9914553711208126};
inline constexpr std::array<double, 15> kGk15W = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292};

template <class F>
double panel_gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += kGk15W[i] * f(c + h * kGk15X[i]);
  return s * h;
}

// 4-point Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 4> kGl4X = {-0.8611363115940526, -0.3399810435848563,
                                                0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGl4W = {0.3478548451374538, 0.6521451548625461,
                                                0.6521451548625461, 0.3478548451374538};

}  // namespace detail

class BoundaryData {
 public:
  static BoundaryData from_samples(std::vector<double> r, std::vector<double> f1,
                                   std::vector<double> f2) {
    if (r.size() < 4 || r.size() != f1.size() || r.size() != f2.size())
      throw err_invalid_parameter("boundary data needs >= 4 aligned samples");
    if (r.front() != 0.0)
      throw err_invalid_parameter("boundary data must start at r = 0");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(f1[i]) || !std::isfinite(f2[i]))
        throw err_non_finite("boundary data contains non-finite samples");
      if (i > 0 && !(r[i] > r[i - 1]))
        throw err_invalid_parameter("boundary data radii must increase strictly");
    }
    BoundaryData bd;
    bd.r_max_ = r.back();
    bd.s1_ = detail::CubicSpline(r, f1);
    bd.s2_ = detail::CubicSpline(std::move(r), std::move(f2));
    return bd;
  }

  static BoundaryData from_functions(const std::function<double(double)>& f1,
                                     const std::function<double(double)>& f2,
                                     double r_max = 20.0, std::size_t n = 512) {
    if (!(r_max > 0.0) || n < 4)
      throw err_invalid_parameter("boundary sampling needs r_max > 0 and n >= 4");
    std::vector<double> r(n), v1(n), v2(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = r_max * static_cast<double>(i) / static_cast<double>(n - 1);
      v1[i] = f1(r[i]);
      v2[i] = f2(r[i]);
    }
    return from_samples(std::move(r), std::move(v1), std::move(v2));
  }

  double f1(double r) const { return r >= r_max_ ? 0.0 : s1_(r); }
  double f2(double r) const { return r >= r_max_ ? 0.0 : s2_(r); }
  double r_max() const { return r_max_; }

  // Truncation guard: the profiles must have decayed at the sampling edge.
  void check_decay(double rel_tol = 1e-3) const {
    double peak = 0.0;
    for (int i = 0; i <= 256; ++i) {
      const double r = r_max_ * i / 256.0;
      peak = std::max(peak, std::max(std::abs(s1_(r)), std::abs(s2_(r))));
    }
    const double edge = std::max(std::abs(s1_(r_max_)), std::abs(s2_(r_max_)));
    if (edge > rel_tol * peak && peak > 0.0)
      throw err_decay_violation("boundary data has not decayed at r_max");
  }

 private:
  double r_max_ = 0.0;
  detail::CubicSpline s1_, s2_;
};

struct SpectralGrid {
  double t_max = 40.0;
  std::size_t panels = 1024;
};

// Line spectrum {t_i, w_i, f1h_i, f2h_i}; weighted sums over it approximate
// t-integrals against the transforms.
struct SpectralData {
  std::vector<double> t, w, f1h, f2h;

  // Single spectral line of unit weight (exact single-mode data).
  static SpectralData line(double t0, double f1h0, double f2h0) {
    return {{t0}, {1.0}, {f1h0}, {f2h0}};
  }
};

// Order-nu Hankel transform of a radial profile truncated at r_max, by
// fixed-panel Gauss-Kronrod summation.
inline double hankel_transform(const std::function<double(double)>& f, int nu, double t,
                               double r_max, std::size_t panels = 128) {
  auto g = [&](double a) {
    const double j = nu == 0 ? bessel_j0(t * a) : bessel_j1(t * a);
    return f(a) * j * a;
  };
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = r_max * static_cast<double>(p) / static_cast<double>(panels);
    const double b = r_max * static_cast<double>(p + 1) / static_cast<double>(panels);
    total += detail::panel_gk15(g, a, b);
  }
  return total;
}

inline SpectralData spectral_transform(const BoundaryData& bd,
                                       const SpectralGrid& grid = {}) {
  if (!(grid.t_max > 0.0) || grid.panels < 1)
    throw err_invalid_parameter("spectral grid needs t_max > 0 and panels >= 1");
  SpectralData sd;
  const std::size_t n = grid.panels * detail::kGl4X.size();
  sd.t.reserve(n);
  sd.w.reserve(n);
  sd.f1h.reserve(n);
  sd.f2h.reserve(n);
  const double h = grid.t_max / static_cast<double>(grid.panels);
  const std::size_t rpanels = 128;
  for (std::size_t p = 0; p < grid.panels; ++p) {
    const double c = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t q = 0; q < detail::kGl4X.size(); ++q) {
      const double t = c + 0.5 * h * detail::kGl4X[q];
      sd.t.push_back(t);
      sd.w.push_back(0.5 * h * detail::kGl4W[q]);
      sd.f1h.push_back(
          hankel_transform([&](double a) { return bd.f1(a); }, 1, t, bd.r_max(), rpanels));
      sd.f2h.push_back(
          hankel_transform([&](double a) { return bd.f2(a); }, 0, t, bd.r_max(), rpanels));
    }
  }
  return sd;
}

}  // namespace axibie
