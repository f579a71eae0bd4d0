#pragma once

// Meridian contours of solids of revolution.
//
// A contour is a parametrized curve s -> (r(s), z(s)) in the half-plane
// r >= 0 describing the boundary cross-section of an axisymmetric solid.
// Closed contours (torus section, spline through samples) are periodic in s;
// the sphere is the classical axis-touching arc s in [0, pi].
//
// frame() returns the inward unit normal regardless of the orientation the
// parametrization happens to have: the signed meridian area is measured once
// at construction and the conventional (-z', r') combination is flipped for
// clockwise curves.  transformed_frame() applies the same convention in the
// lambda-stretched plane, where the normal cosines are
//   n1 = -sigma lambda z' / S,   n2 = sigma r' / S,   S = sqrt(r'^2 + lambda^2 z'^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "axibie/errors.hpp"

namespace axibie {

struct ContourPoint {
  double r = 0.0, z = 0.0;
  double rp = 0.0, zp = 0.0;    // d/ds
  double rpp = 0.0, zpp = 0.0;  // d^2/ds^2
};

// Physical-plane inward normal cosines and parametric speed |x'(s)|.
struct LocalFrame {
  double n1 = 0.0;  // radial component
  double n2 = 0.0;  // axial component
  double speed = 0.0;
};

// Stretched-plane frame for a quasi-harmonic branch with ratio lambda.
struct TransformedFrame {
  double n1 = 0.0;
  double n2 = 0.0;
  double speed = 0.0;  // S = sqrt(r'^2 + lambda^2 z'^2)
};

enum class ContourKind { torus, sphere, samples };

class Contour {
 public:
  static Contour torus(double R0, double rho) {
    if (!(rho > 0.0) || !(R0 > rho) || !std::isfinite(R0) || !std::isfinite(rho))
      throw err_invalid_parameter("torus contour requires R0 > rho > 0");
    Contour c;
    c.kind_ = ContourKind::torus;
    c.p0_ = R0;
    c.p1_ = rho;
    c.period_ = 2.0 * std::numbers::pi;
    c.closed_ = true;
    c.finish_setup();
    return c;
  }

  static Contour sphere(double R) {
    if (!(R > 0.0) || !std::isfinite(R))
      throw err_invalid_parameter("sphere contour requires R > 0");
    Contour c;
    c.kind_ = ContourKind::sphere;
    c.p0_ = R;
    c.period_ = std::numbers::pi;
    c.closed_ = false;
    c.finish_setup();
    return c;
  }

  // Closed periodic cubic spline through the given meridian points, uniform
  // parameter on [0, 2 pi).
  static Contour through_samples(const std::vector<std::array<double, 2>>& pts) {
    if (pts.size() < 4)
      throw err_degenerate_contour("sample contour needs at least 4 points");
    for (const auto& p : pts) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !(p[0] > 0.0))
        throw err_degenerate_contour("sample contour points must be finite with r > 0");
    }
    Contour c;
    c.kind_ = ContourKind::samples;
    c.period_ = 2.0 * std::numbers::pi;
    c.closed_ = true;
    c.build_spline(pts);
    c.finish_setup();
    return c;
  }

  ContourKind kind() const { return kind_; }
  double period() const { return period_; }
  bool closed() const { return closed_; }
  bool touches_axis() const { return kind_ == ContourKind::sphere; }
  // +1 if the parametrization runs counterclockwise around the section.
  double orientation() const { return orientation_; }

  ContourPoint at(double s) const {
    switch (kind_) {
      case ContourKind::torus: {
        const double c = std::cos(s), sn = std::sin(s);
        return {p0_ + p1_ * c, p1_ * sn, -p1_ * sn, p1_ * c, -p1_ * c, -p1_ * sn};
      }
      case ContourKind::sphere: {
        const double c = std::cos(s), sn = std::sin(s);
        return {p0_ * sn, p0_ * c, p0_ * c, -p0_ * sn, -p0_ * sn, -p0_ * c};
      }
      case ContourKind::samples:
        return spline_at(s);
    }
    throw err_invalid_parameter("unknown contour kind");
  }

  LocalFrame frame(double s) const {
    const ContourPoint p = at(s);
    const double sp2 = p.rp * p.rp + p.zp * p.zp;
    if (sp2 < 1e-20) throw err_degenerate_point("vanishing parametric speed on contour");
    const double sp = std::sqrt(sp2);
    return {-orientation_ * p.zp / sp, orientation_ * p.rp / sp, sp};
  }

  TransformedFrame transformed_frame(double s, double lambda) const {
    if (!(lambda > 0.0)) throw err_invalid_parameter("transformed frame requires lambda > 0");
    const ContourPoint p = at(s);
    const double sp2 = p.rp * p.rp + p.zp * p.zp;
    if (sp2 < 1e-20) throw err_degenerate_point("vanishing parametric speed on contour");
    const double S = std::sqrt(p.rp * p.rp + lambda * lambda * p.zp * p.zp);
    return {-orientation_ * lambda * p.zp / S, orientation_ * p.rp / S, S};
  }

  // Crossing-number test for the meridian section (axis-touching arcs are
  // closed through the axis segment).  Points on the boundary are not
  // meaningfully classified.
  bool contains(double r, double z) const {
    bool inside = false;
    const std::size_t n = polygon_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const auto& a = polygon_[j];
      const auto& b = polygon_[i];
      if ((b[1] > z) != (a[1] > z)) {
        const double xr = b[0] + (z - b[1]) * (a[0] - b[0]) / (a[1] - b[1]);
        if (r < xr) inside = !inside;
      }
    }
    return inside;
  }

  // Distance from a point to the curve, via a dense scan refined by golden
  // section in the winning bracket.
  double nearest_distance(double r, double z) const {
    const std::size_t n = scan_.size();
    double best = 1e300;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dr = scan_[i][0] - r, dz = scan_[i][1] - z;
      const double d2 = dr * dr + dz * dz;
      if (d2 < best) {
        best = d2;
        bi = i;
      }
    }
    const double h = period_ / static_cast<double>(closed_ ? n : n - 1);
    double lo = static_cast<double>(bi) * h - h;
    double hi = static_cast<double>(bi) * h + h;
    if (!closed_) {
      lo = std::max(lo, 0.0);
      hi = std::min(hi, period_);
    }
    auto d2_at = [&](double s) {
      const ContourPoint p = at(wrap(s));
      const double dr = p.r - r, dz = p.z - z;
      return dr * dr + dz * dz;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = d2_at(c1), f2 = d2_at(c2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        b = c2;
        c2 = c1;
        f2 = f1;
        c1 = b - gr * (b - a);
        f1 = d2_at(c1);
      } else {
        a = c1;
        c1 = c2;
        f1 = f2;
        c2 = a + gr * (b - a);
        f2 = d2_at(c2);
      }
    }
    return std::sqrt(std::min(f1, f2));
  }

  // Representative linear size (radius of the bounding circle of the section).
  double scale() const { return scale_; }

 private:
  Contour() = default;

  double wrap(double s) const {
    if (!closed_) return std::clamp(s, 0.0, period_);
    double t = std::fmod(s, period_);
    if (t < 0.0) t += period_;
    return t;
  }

  void build_spline(const std::vector<std::array<double, 2>>& pts) {
    const std::size_t n = pts.size();
    knots_ = pts;
    const double h = period_ / static_cast<double>(n);
    // Cyclic tridiagonal system for the second derivatives of each component.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd rhs(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
      A(i, im) += h / 6.0;
      A(i, i) += 2.0 * h / 3.0;
      A(i, ip) += h / 6.0;
      for (int c = 0; c < 2; ++c)
        rhs(i, c) = (pts[ip][c] - 2.0 * pts[i][c] + pts[im][c]) / h;
    }
    const Eigen::MatrixXd M = A.partialPivLu().solve(rhs);
    m2_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m2_[i] = {M(i, 0), M(i, 1)};
  }

  ContourPoint spline_at(double s) const {
    const std::size_t n = knots_.size();
    const double h = period_ / static_cast<double>(n);
    double t = wrap(s);
    std::size_t i = std::min(static_cast<std::size_t>(t / h), n - 1);
    const std::size_t ip = (i + 1) % n;
    const double u = (t - static_cast<double>(i) * h) / h;
    ContourPoint out;
    const double um = 1.0 - u;
    for (int c = 0; c < 2; ++c) {
      const double y0 = knots_[i][c], y1 = knots_[ip][c];
      const double m0 = m2_[i][c], m1 = m2_[ip][c];
      const double v = um * y0 + u * y1 +
                       (h * h / 6.0) * ((um * um * um - um) * m0 + (u * u * u - u) * m1);
      const double d = (y1 - y0) / h +
                       (h / 6.0) * ((3.0 * u * u - 1.0) * m1 - (3.0 * um * um - 1.0) * m0);
      const double dd = um * m0 + u * m1;
      if (c == 0) {
        out.r = v;
        out.rp = d;
        out.rpp = dd;
      } else {
        out.z = v;
        out.zp = d;
        out.zpp = dd;
      }
    }
    return out;
  }

  void finish_setup() {
    // Orientation from the signed meridian area; dense polygon caches for the
    // inside test and the distance scan.
    const std::size_t n = 2048;
    polygon_.clear();
    scan_.clear();
    polygon_.reserve(n + 2);
    scan_.reserve(n + 1);
    double area2 = 0.0;
    const std::size_t steps = closed_ ? n : n + 1;
    double rmin = 1e300, rmax = -1e300, zmin = 1e300, zmax = -1e300;
    for (std::size_t i = 0; i < steps; ++i) {
      const double s = period_ * static_cast<double>(i) / static_cast<double>(n);
      const ContourPoint p = at(s);
      if (!std::isfinite(p.r) || !std::isfinite(p.z) || p.r < -1e-12)
        throw err_degenerate_contour("contour leaves the meridian half-plane");
      polygon_.push_back({p.r, p.z});
      scan_.push_back({p.r, p.z});
      area2 += p.r * p.zp - p.z * p.rp;
      rmin = std::min(rmin, p.r);
      rmax = std::max(rmax, p.r);
      zmin = std::min(zmin, p.z);
      zmax = std::max(zmax, p.z);
    }
    // Axis-touching arcs close through the axis for the polygon test.
    if (!closed_) {
      const ContourPoint pe = at(period_);
      polygon_.push_back({0.0, pe.z});
      polygon_.push_back({0.0, at(0.0).z});
    }
    area2 *= period_ / static_cast<double>(n);
    if (std::abs(area2) < 1e-14)
      throw err_degenerate_contour("contour encloses no meridian area");
    orientation_ = area2 > 0.0 ? 1.0 : -1.0;
    scale_ = 0.5 * std::hypot(rmax - rmin, zmax - zmin);
  }

  ContourKind kind_ = ContourKind::torus;
  double p0_ = 0.0, p1_ = 0.0;
  double period_ = 0.0;
  bool closed_ = true;
  double orientation_ = 1.0;
  double scale_ = 0.0;
  std::vector<std::array<double, 2>> knots_;
  std::vector<std::array<double, 2>> m2_;
  std::vector<std::array<double, 2>> polygon_;
  std::vector<std::array<double, 2>> scan_;
};

}  // namespace axibie
