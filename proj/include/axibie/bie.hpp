#pragma once

// Nystrom discretization and direct solution of the second-kind boundary
// system for the axisymmetric displacement problem.
//
// The displacement field inside the body is represented by a pair of layer
// densities (h1, h2) on the meridional contour.  Per quasi-harmonic branch k
// the representation contracts four ring-kernel atoms
//     { dw0/dr, dw0/dz, dw1/dz, (1/r) d(r w1)/dr }
// against the stretched-frame direction cosines of the source element.  The
// default scheme ("conjugate_paired") pairs dw1/dz with dw0/dr and
// (1/r)d(r w1)/dr with dw0/dz, which makes every frame contraction the exact
// gradient of a scalar potential: the pair (dw1/dz, -(1/r)d(r w1)/dr) is
// curl-free in the stretched plane, so the combination
//     n2 * Phi + n1 * w0      (per unit h1)
//     n1 * Phi - n2 * w0      (per unit h2)
// with grad Phi = (dw1/dz, -(1/r)d(r w1)/dr) is a genuine potential for each
// source element on a curved boundary.  On the flat half-plane boundary both
// schemes collapse to the same convolution operator (verified against the
// Hankel-transform solver); on curved contours only the conjugate-paired
// form remains compatible with the potential ansatz.  The historical variant
// ("as_printed") is kept behind a toggle for comparison.
//
// Boundary limits carry a unit jump: interior values of the representation
// tend to h(s0) + PV-integral, so the collocated system is (I + K) h = g.
//
// Quadrature: each kernel entry is split as
//     M(u0, u) = A(u0, u) * ln(4 sin^2((u - u0)/2)) + B(u0, u)
// on the 2*pi-periodic parameter u, with A obtained in closed form from the
// logarithmic coefficients of the atoms (clam_* family) and B smooth.  The
// log factor is integrated with the spectrally accurate periodic product
// rule; B uses the trapezoid rule.  The diagonal of B is recovered by
// two-sided Richardson extrapolation, which simultaneously cancels the odd
// principal-value component and the even h^2 error terms.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "axibie/contour.hpp"
#include "axibie/errors.hpp"
#include "axibie/material.hpp"
#include "axibie/ring_kernels.hpp"

namespace axibie {

// Which curved-boundary kernel pairing to assemble.  conjugate_paired is the
// production scheme; as_printed reproduces a historical variant that agrees
// on flat boundaries but loses the potential structure on curved ones (it is
// retained so the difference stays measurable).
enum class KernelScheme { conjugate_paired, as_printed };

struct BieOptions {
  KernelScheme scheme = KernelScheme::conjugate_paired;
  int threads = 0;  // 0: use hardware concurrency
};

struct GridNode {
  double x = 0.0;  // contour parameter
  double r = 0.0, z = 0.0;
  LocalFrame phys;                       // physical inward frame
  std::array<TransformedFrame, 2> tf{};  // stretched frames for lambda1, lambda2
};

struct NystromGrid {
  int n = 0;
  double period = 0.0;
  double base_weight = 0.0;  // plain trapezoid weight: period / n
  std::vector<GridNode> nodes;
  std::vector<double> log_weights;  // periodic log-rule weights by index distance
  double max_transformed_speed = 0.0;
};

struct DensityPair {
  std::vector<double> h1, h2;
  double residual = std::numeric_limits<double>::quiet_NaN();
};

struct BieSystem {
  BieSystem(Contour c, const CharacteristicData& d, KernelScheme s)
      : contour(std::move(c)), cd(d), scheme(s) {}

  NystromGrid grid;
  Eigen::MatrixXd matrix;  // (2N) x (2N): identity + compact blocks
  Contour contour;
  CharacteristicData cd;
  KernelScheme scheme;
  double condition = std::numeric_limits<double>::quiet_NaN();
  double smallest_singular_value = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Weights of the periodic rule for ln(4 sin^2((u - u0)/2)) against values at
// equispaced nodes u_j = 2 pi j / n: exact for trigonometric polynomials up
// to degree n/2.  Depends only on the circular index distance.
inline std::vector<double> log_rule_weights(int n) {
  const double pi = std::numbers::pi;
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  // The table is even in d modulo n; computing one half and mirroring keeps
  // that symmetry exact in floating point.
  for (int d = 0; d <= n / 2; ++d) {
    double acc = 0.0;
    for (int m = 1; m <= n / 2 - 1; ++m) {
      acc += std::cos(2.0 * pi * m * d / n) / static_cast<double>(m);
    }
    const double sign = d % 2 == 0 ? 1.0 : -1.0;
    w[static_cast<std::size_t>(d)] = -(4.0 * pi / n) * acc - (4.0 * pi / (n * n)) * sign;
    if (d > 0 && d < n / 2) w[static_cast<std::size_t>(n - d)] = w[static_cast<std::size_t>(d)];
  }
  return w;
}

inline GridNode make_node(const Contour& c, const CharacteristicData& cd, double x) {
  GridNode node;
  node.x = x;
  const ContourPoint p = c.at(x);
  node.r = p.r;
  node.z = p.z;
  node.phys = c.frame(x);
  node.tf[0] = c.transformed_frame(x, cd.lambda1);
  node.tf[1] = c.transformed_frame(x, cd.lambda2);
  return node;
}

// Per-branch coefficient bundles of both schemes.
struct SchemeCoefficients {
  std::array<double, 2> lambda{}, kk{};
  std::array<double, 2> alpha_bar{}, beta_bar{};  // conjugate_paired
  std::array<double, 2> p1{}, p2{}, q1{}, q2{};   // as_printed
};

inline SchemeCoefficients scheme_coefficients(const CharacteristicData& cd) {
  SchemeCoefficients sc;
  const double d = cd.delta;
  sc.lambda = {cd.lambda1, cd.lambda2};
  sc.kk = {cd.k1, cd.k2};
  sc.alpha_bar = {cd.k2 * cd.lambda2 / d, -cd.k1 * cd.lambda1 / d};
  sc.beta_bar = {1.0 / d, -1.0 / d};
  sc.p1 = {-cd.k2 * cd.lambda2 / d, cd.k1 * cd.lambda1 / d};
  sc.p2 = {1.0 / d, -1.0 / d};
  const double kprod = cd.k1 * cd.k2 * cd.lambda1 * cd.lambda2 / d;
  sc.q1 = {kprod, -kprod};
  sc.q2 = {cd.k1 * cd.lambda1 / d, -cd.k2 * cd.lambda2 / d};
  return sc;
}

// The four kernel atoms of one branch, either raw values or their
// log-splitting coefficients.
struct AtomSet {
  double w0_r = 0.0, w0_d = 0.0, w1_d = 0.0, w1f = 0.0;
};

struct BlockEntries {
  double k11 = 0.0, k12 = 0.0, k21 = 0.0, k22 = 0.0;
};

// Contracts per-branch atoms against the source frames and the scheme
// coefficients.  The same map serves raw kernel values and their log
// coefficients, because both live in the same atom basis.  jac converts the
// contour parameter to the 2*pi-periodic quadrature variable.
inline BlockEntries contract(KernelScheme scheme, const SchemeCoefficients& sc,
                             const std::array<AtomSet, 2>& atoms, const GridNode& src,
                             double jac) {
  BlockEntries e;
  for (int k = 0; k < 2; ++k) {
    const AtomSet& a = atoms[static_cast<std::size_t>(k)];
    const double n1 = src.tf[static_cast<std::size_t>(k)].n1;
    const double n2 = src.tf[static_cast<std::size_t>(k)].n2;
    if (scheme == KernelScheme::conjugate_paired) {
      const double meas = src.r * src.tf[static_cast<std::size_t>(k)].speed * jac;
      const double kl = sc.kk[static_cast<std::size_t>(k)] * sc.lambda[static_cast<std::size_t>(k)];
      const double ab = sc.alpha_bar[static_cast<std::size_t>(k)];
      const double bb = sc.beta_bar[static_cast<std::size_t>(k)];
      e.k11 += ab * (n2 * a.w1_d + n1 * a.w0_r) * meas;
      e.k12 += bb * (n1 * a.w1_d - n2 * a.w0_r) * meas;
      e.k21 += -kl * ab * (n2 * a.w1f - n1 * a.w0_d) * meas;
      e.k22 += -kl * bb * (n1 * a.w1f + n2 * a.w0_d) * meas;
    } else {
      const double meas = src.r * jac;
      const double dng_big = a.w1f * n1 + a.w1_d * n2;
      const double dtg_big = a.w1_d * n1 - a.w1f * n2;
      const double dng_small = a.w0_r * n1 + a.w0_d * n2;
      const double dtg_small = a.w0_d * n1 - a.w0_r * n2;
      e.k11 += sc.p1[static_cast<std::size_t>(k)] * dng_big * meas;
      e.k12 += sc.p2[static_cast<std::size_t>(k)] * dtg_small * meas;
      e.k21 += sc.q1[static_cast<std::size_t>(k)] * dtg_big * meas;
      e.k22 += sc.q2[static_cast<std::size_t>(k)] * dng_small * meas;
    }
  }
  return e;
}

inline std::array<AtomSet, 2> raw_atoms(const CharacteristicData& cd, double r, double z,
                                        const GridNode& src) {
  std::array<AtomSet, 2> atoms{};
  const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
  for (int k = 0; k < 2; ++k) {
    const double lam = lambda[static_cast<std::size_t>(k)];
    const FieldPoint p{r, lam * z};
    const RingPole q{src.r, lam * src.z};
    const KernelJet w0 = w0_jet(p, q);
    const KernelJet w1 = w1_jet(p, q);
    const W1FJet f = w1f_jet(p, q);
    atoms[static_cast<std::size_t>(k)] = {w0.d_r, w0.d_z, w1.d_z, f.value};
  }
  return atoms;
}

inline std::array<AtomSet, 2> log_coefficient_atoms(const CharacteristicData& cd, double r,
                                                    double z, const GridNode& src) {
  std::array<AtomSet, 2> atoms{};
  const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
  for (int k = 0; k < 2; ++k) {
    const double lam = lambda[static_cast<std::size_t>(k)];
    const FieldPoint p{r, lam * z};
    const RingPole q{src.r, lam * src.z};
    atoms[static_cast<std::size_t>(k)] = {clam_w0_r(p, q), clam_w0_d(p, q), clam_w1_d(p, q),
                                          clam_w1f(p, q)};
  }
  return atoms;
}

// Coincidence limits of the log coefficients: the d-derivative atoms lose
// their logarithm entirely, while the radial pair tends to -+1/(2 pi r^2).
inline std::array<AtomSet, 2> log_coefficient_atoms_coincident(double r) {
  const double c = 1.0 / (2.0 * std::numbers::pi * r * r);
  AtomSet a{-c, 0.0, 0.0, c};
  return {a, a};
}

// -0.5 converts the ln(1/sqrt(mc)) convention of the clam_* family into the
// coefficient of ln(4 sin^2((u-u0)/2)).
inline BlockEntries log_factor_entries(KernelScheme scheme, const SchemeCoefficients& sc,
                                       const CharacteristicData& cd, double r, double z,
                                       const GridNode& src, double jac, bool coincident) {
  const auto atoms =
      coincident ? log_coefficient_atoms_coincident(src.r) : log_coefficient_atoms(cd, r, z, src);
  BlockEntries e = contract(scheme, sc, atoms, src, jac);
  e.k11 *= -0.5;
  e.k12 *= -0.5;
  e.k21 *= -0.5;
  e.k22 *= -0.5;
  return e;
}

inline BlockEntries raw_entries(KernelScheme scheme, const SchemeCoefficients& sc,
                                const CharacteristicData& cd, double r, double z,
                                const GridNode& src, double jac) {
  return contract(scheme, sc, raw_atoms(cd, r, z, src), src, jac);
}

// Smooth remainder B = M - A * ln(4 sin^2(du/2)) at parameter distance du.
inline BlockEntries smooth_entries(KernelScheme scheme, const SchemeCoefficients& sc,
                                   const CharacteristicData& cd, double r, double z,
                                   const GridNode& src, double jac, double du) {
  const BlockEntries raw = raw_entries(scheme, sc, cd, r, z, src, jac);
  const BlockEntries lg = log_factor_entries(scheme, sc, cd, r, z, src, jac, false);
  const double s = std::sin(0.5 * du);
  const double lnfac = std::log(4.0 * s * s);
  return {raw.k11 - lg.k11 * lnfac, raw.k12 - lg.k12 * lnfac, raw.k21 - lg.k21 * lnfac,
          raw.k22 - lg.k22 * lnfac};
}

}  // namespace detail

// Assembles the collocated (I + K) system on n equispaced parameter nodes.
inline BieSystem assemble(const Contour& c, const CharacteristicData& cd, int n,
                          const BieOptions& opt = {}) {
  if (n < 16 || n % 2 != 0) {
    throw ConfigError("node count must be even and at least 16, got " + std::to_string(n));
  }
  if (!c.closed() || c.touches_axis()) {
    throw err_degenerate_contour(
        "the boundary solver requires a closed meridional contour bounded away from the axis");
  }
  BieSystem sys(c, cd, opt.scheme);

  const double pi = std::numbers::pi;
  const double period = c.period();
  const double jac = period / (2.0 * pi);  // du -> ds
  NystromGrid& grid = sys.grid;
  grid.n = n;
  grid.period = period;
  grid.base_weight = period / n;
  grid.log_weights = detail::log_rule_weights(n);
  grid.nodes.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    GridNode node = detail::make_node(c, cd, period * j / n);
    if (!(node.r > 0.0)) {
      throw err_degenerate_contour("grid node radius must stay positive");
    }
    grid.nodes.push_back(node);
    grid.max_transformed_speed =
        std::max({grid.max_transformed_speed, node.tf[0].speed, node.tf[1].speed});
  }

  const detail::SchemeCoefficients sc = detail::scheme_coefficients(cd);
  sys.matrix = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const double du = 2.0 * pi / n;

  auto fill_row = [&](int i) {
    const GridNode& pi_node = grid.nodes[static_cast<std::size_t>(i)];
    const double r = pi_node.r, z = pi_node.z;
    for (int j = 0; j < n; ++j) {
      const GridNode& src = grid.nodes[static_cast<std::size_t>(j)];
      detail::BlockEntries entry;
      if (j != i) {
        const detail::BlockEntries raw = detail::raw_entries(sys.scheme, sc, cd, r, z, src, jac);
        const detail::BlockEntries lg =
            detail::log_factor_entries(sys.scheme, sc, cd, r, z, src, jac, false);
        const double udiff = du * (i - j);
        const double s = std::sin(0.5 * udiff);
        const double lnfac = std::log(4.0 * s * s);
        const double rw = grid.log_weights[static_cast<std::size_t>(std::abs(i - j))];
        const double tw = 2.0 * pi / n;
        entry.k11 = rw * lg.k11 + tw * (raw.k11 - lg.k11 * lnfac);
        entry.k12 = rw * lg.k12 + tw * (raw.k12 - lg.k12 * lnfac);
        entry.k21 = rw * lg.k21 + tw * (raw.k21 - lg.k21 * lnfac);
        entry.k22 = rw * lg.k22 + tw * (raw.k22 - lg.k22 * lnfac);
      } else {
        const detail::BlockEntries lg =
            detail::log_factor_entries(sys.scheme, sc, cd, r, z, src, jac, true);
        // Two-sided sampling of the smooth part at shrinking offsets; the
        // average removes the odd principal-value component and Richardson
        // extrapolation removes the even h^2 and h^4 terms.
        std::array<detail::BlockEntries, 3> s_avg{};
        for (int lev = 0; lev < 3; ++lev) {
          const double h = du / (2 << lev);  // du/2, du/4, du/8
          for (const double sign : {1.0, -1.0}) {
            const GridNode off = detail::make_node(c, cd, pi_node.x + sign * h * jac);
            const detail::BlockEntries b =
                detail::smooth_entries(sys.scheme, sc, cd, r, z, off, jac, h);
            auto& acc = s_avg[static_cast<std::size_t>(lev)];
            acc.k11 += 0.5 * b.k11;
            acc.k12 += 0.5 * b.k12;
            acc.k21 += 0.5 * b.k21;
            acc.k22 += 0.5 * b.k22;
          }
        }
        auto richardson = [](double s1, double s2, double s3) {
          const double t1 = (4.0 * s2 - s1) / 3.0;
          const double t2 = (4.0 * s3 - s2) / 3.0;
          return (16.0 * t2 - t1) / 15.0;
        };
        const double rw = grid.log_weights[0];
        const double tw = 2.0 * pi / n;
        entry.k11 = rw * lg.k11 + tw * richardson(s_avg[0].k11, s_avg[1].k11, s_avg[2].k11);
        entry.k12 = rw * lg.k12 + tw * richardson(s_avg[0].k12, s_avg[1].k12, s_avg[2].k12);
        entry.k21 = rw * lg.k21 + tw * richardson(s_avg[0].k21, s_avg[1].k21, s_avg[2].k21);
        entry.k22 = rw * lg.k22 + tw * richardson(s_avg[0].k22, s_avg[1].k22, s_avg[2].k22);
      }
      sys.matrix(i, j) = entry.k11;
      sys.matrix(i, n + j) = entry.k12;
      sys.matrix(n + i, j) = entry.k21;
      sys.matrix(n + i, n + j) = entry.k22;
    }
    sys.matrix(i, i) += 1.0;
    sys.matrix(n + i, n + i) += 1.0;
  };

  int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fill_row(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < n; i += threads) fill_row(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (!sys.matrix.allFinite()) {
    throw err_non_finite("assembled boundary matrix");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix);
  const auto& sv = svd.singularValues();
  sys.smallest_singular_value = sv(sv.size() - 1);
  sys.condition = sv(0) / sv(sv.size() - 1);
  return sys;
}

// Direct dense solve of (I + K) h = g with a residual guard.
inline DensityPair solve(const BieSystem& sys, const std::vector<double>& g1,
                         const std::vector<double>& g2) {
  const int n = sys.grid.n;
  if (static_cast<int>(g1.size()) != n || static_cast<int>(g2.size()) != n) {
    throw ConfigError("boundary data length must match the grid");
  }
  Eigen::VectorXd rhs(2 * n);
  double gmax = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(g1[static_cast<std::size_t>(i)]) ||
        !std::isfinite(g2[static_cast<std::size_t>(i)])) {
      throw err_non_finite("boundary data");
    }
    rhs(i) = g1[static_cast<std::size_t>(i)];
    rhs(n + i) = g2[static_cast<std::size_t>(i)];
    gmax = std::max({gmax, std::abs(rhs(i)), std::abs(rhs(n + i))});
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
  const Eigen::VectorXd x = lu.solve(rhs);
  const double residual = (sys.matrix * x - rhs).lpNorm<Eigen::Infinity>();
  const double tol = 1e-10 * std::max(gmax, std::numeric_limits<double>::min());
  if (!x.allFinite() || residual > tol) {
    throw err_singular_system("linear solve residual " + std::to_string(residual) +
                              " exceeds tolerance");
  }
  DensityPair h;
  h.residual = residual;
  h.h1.resize(static_cast<std::size_t>(n));
  h.h2.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    h.h1[static_cast<std::size_t>(i)] = x(i);
    h.h2[static_cast<std::size_t>(i)] = x(n + i);
  }
  return h;
}

// The four auxiliary densities per node implied by (h1, h2).
struct GammaSet {
  double g11 = 0.0, g21 = 0.0, g12 = 0.0, g22 = 0.0;
};

inline GammaSet gammas(double h1, double h2, const CharacteristicData& cd) {
  if (!(std::abs(cd.delta) > 0.0)) throw err_zero_delta("gamma split requires delta != 0");
  GammaSet g;
  g.g11 = -cd.k2 * cd.lambda2 * h1 / cd.delta;
  g.g21 = cd.k1 * cd.lambda1 * h1 / cd.delta;
  g.g12 = -h2 / cd.delta;
  g.g22 = h2 / cd.delta;
  return g;
}

namespace detail {

// Trigonometric interpolation of periodic nodal data onto a finer equispaced
// grid (both even).  Plain O(n^2 + nf*n) synthesis; the density vectors are
// short enough that no transform library is warranted.
inline std::vector<double> upsample_periodic(const std::vector<double>& v, int nf) {
  const int n = static_cast<int>(v.size());
  if (nf == n) return v;
  const double pi = std::numbers::pi;
  const int half = n / 2;
  std::vector<double> ac(static_cast<std::size_t>(half) + 1, 0.0);
  std::vector<double> as(static_cast<std::size_t>(half) + 1, 0.0);
  for (int m = 0; m <= half; ++m) {
    double ca = 0.0, sa = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ang = 2.0 * pi * m * j / n;
      ca += v[static_cast<std::size_t>(j)] * std::cos(ang);
      sa += v[static_cast<std::size_t>(j)] * std::sin(ang);
    }
    ac[static_cast<std::size_t>(m)] = 2.0 * ca / n;
    as[static_cast<std::size_t>(m)] = 2.0 * sa / n;
  }
  std::vector<double> out(static_cast<std::size_t>(nf), 0.0);
  for (int q = 0; q < nf; ++q) {
    const double u = 2.0 * pi * q / nf;
    const std::complex<double> w(std::cos(u), std::sin(u));
    std::complex<double> pw = w;
    double acc = 0.5 * ac[0];
    for (int m = 1; m < half; ++m) {
      acc += ac[static_cast<std::size_t>(m)] * pw.real() + as[static_cast<std::size_t>(m)] * pw.imag();
      pw *= w;
    }
    acc += 0.5 * ac[static_cast<std::size_t>(half)] * pw.real();
    out[static_cast<std::size_t>(q)] = acc;
  }
  return out;
}

struct FineTable {
  int nf = 0;
  std::vector<GridNode> nodes;
  std::vector<double> h1, h2;
};

inline FineTable make_fine_table(const BieSystem& sys, const DensityPair& h, int nf) {
  FineTable t;
  t.nf = nf;
  t.nodes.reserve(static_cast<std::size_t>(nf));
  for (int q = 0; q < nf; ++q) {
    t.nodes.push_back(make_node(sys.contour, sys.cd, sys.grid.period * q / nf));
  }
  t.h1 = upsample_periodic(h.h1, nf);
  t.h2 = upsample_periodic(h.h2, nf);
  return t;
}

inline Displacement eval_from_table(const BieSystem& sys, const SchemeCoefficients& sc,
                                    const FineTable& t, double r, double z) {
  const double jac = sys.grid.period / (2.0 * std::numbers::pi);
  const double w = 2.0 * std::numbers::pi / t.nf;
  Displacement u;
  for (int q = 0; q < t.nf; ++q) {
    const BlockEntries e =
        raw_entries(sys.scheme, sc, sys.cd, r, z, t.nodes[static_cast<std::size_t>(q)], jac);
    u.u_r += w * (e.k11 * t.h1[static_cast<std::size_t>(q)] + e.k12 * t.h2[static_cast<std::size_t>(q)]);
    u.u_z += w * (e.k21 * t.h1[static_cast<std::size_t>(q)] + e.k22 * t.h2[static_cast<std::size_t>(q)]);
  }
  return u;
}

// Number of fine trapezoid nodes needed for ~1e-7 quadrature accuracy at
// physical distance d from the contour: the integrand's nearest complex
// parameter singularity sits at height ~ d / S_max, and the trapezoid error
// decays exponentially at that rate.
inline constexpr int kFineNodeCap = 200000;

inline int fine_node_count(const BieSystem& sys, double d) {
  const double smax = std::max(sys.grid.max_transformed_speed, 1e-300);
  const double gap = d / (1.25 * smax);
  const double raw = 16.0 / std::max(gap, 1e-12);
  int nf = static_cast<int>(std::clamp(raw, static_cast<double>(sys.grid.n),
                                       static_cast<double>(kFineNodeCap)));
  if (nf % 2 != 0) ++nf;
  return nf;
}

}  // namespace detail

// Displacement of the layer representation at a point off the contour.  The
// caller chooses the evaluation point; accuracy is governed by its distance
// to the contour (fine_nodes = 0 sizes the quadrature automatically).
inline Displacement layer_displacement(const BieSystem& sys, const DensityPair& h, double r,
                                       double z, int fine_nodes = 0) {
  if (static_cast<int>(h.h1.size()) != sys.grid.n ||
      static_cast<int>(h.h2.size()) != sys.grid.n) {
    throw ConfigError("density length must match the grid");
  }
  if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(z)) {
    throw err_invalid_parameter("field point must be finite with r >= 0");
  }
  int nf = fine_nodes;
  if (nf <= 0) {
    nf = detail::fine_node_count(sys, std::max(sys.contour.nearest_distance(r, z), 1e-12));
  }
  const detail::SchemeCoefficients sc = detail::scheme_coefficients(sys.cd);
  const detail::FineTable t = detail::make_fine_table(sys, h, nf);
  return detail::eval_from_table(sys, sc, t, r, z);
}

// Self-consistency probe of the unit boundary jump at one node: approaches
// the node along the inward normal on a shrinking ladder, extrapolates to
// zero distance, and compares with the direct collocated value h + PV.
struct JumpCheckResult {
  std::array<double, 4> eps{};
  std::array<Displacement, 4> ladder{};
  Displacement interior_limit;
  Displacement direct_value;
  double jump_error = 0.0;
};

namespace detail {

// Distances of the boundary-approach ladder as fractions of the contour
// scale.  Geometric spacing keeps the polynomial extrapolation to zero
// stable, and the finest level is shallow enough that fine_node_count
// stays far below its cap even for strongly stretched materials.
inline constexpr std::array<double, 4> kJumpLadderFractions{1e-2, 5e-3, 2.5e-3, 1.25e-3};

// Polynomial extrapolation of the ladder values to distance zero
// (Lagrange weights evaluated at the origin).
template <std::size_t N>
inline Displacement neville_at_zero(const std::array<double, N>& eps,
                                    const std::array<Displacement, N>& u) {
  Displacement out;
  for (std::size_t i = 0; i < N; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      w *= -eps[j] / (eps[i] - eps[j]);
    }
    out.u_r += w * u[i].u_r;
    out.u_z += w * u[i].u_z;
  }
  return out;
}

inline Displacement direct_row_value(const BieSystem& sys, const DensityPair& h, int node) {
  const int n = sys.grid.n;
  Displacement d;
  for (int j = 0; j < n; ++j) {
    d.u_r += sys.matrix(node, j) * h.h1[static_cast<std::size_t>(j)] +
             sys.matrix(node, n + j) * h.h2[static_cast<std::size_t>(j)];
    d.u_z += sys.matrix(n + node, j) * h.h1[static_cast<std::size_t>(j)] +
             sys.matrix(n + node, n + j) * h.h2[static_cast<std::size_t>(j)];
  }
  return d;
}

}  // namespace detail

inline JumpCheckResult jump_check(const BieSystem& sys, const DensityPair& h, int node) {
  if (node < 0 || node >= sys.grid.n) throw ConfigError("node index out of range");
  const double scale = sys.contour.scale();
  JumpCheckResult res;
  for (std::size_t lev = 0; lev < res.eps.size(); ++lev) {
    res.eps[lev] = detail::kJumpLadderFractions[lev] * scale;
  }
  const detail::SchemeCoefficients sc = detail::scheme_coefficients(sys.cd);
  const GridNode& g = sys.grid.nodes[static_cast<std::size_t>(node)];
  for (int lev = 0; lev < 4; ++lev) {
    const double eps = res.eps[static_cast<std::size_t>(lev)];
    const double r = g.r + eps * g.phys.n1;
    const double z = g.z + eps * g.phys.n2;
    const int nf = detail::fine_node_count(sys, eps);
    const detail::FineTable t = detail::make_fine_table(sys, h, nf);
    res.ladder[static_cast<std::size_t>(lev)] = detail::eval_from_table(sys, sc, t, r, z);
  }
  res.interior_limit = detail::neville_at_zero(res.eps, res.ladder);
  res.direct_value = detail::direct_row_value(sys, h, node);
  res.jump_error = std::max(std::abs(res.interior_limit.u_r - res.direct_value.u_r),
                            std::abs(res.interior_limit.u_z - res.direct_value.u_z));
  return res;
}

// Largest jump error over every stride-th node; fine tables are shared
// across nodes per ladder level and the per-node sums run in parallel.
inline double jump_check_max_error(const BieSystem& sys, const DensityPair& h, int stride = 1,
                                   int threads = 0) {
  if (stride < 1) throw ConfigError("stride must be positive");
  const double scale = sys.contour.scale();
  std::array<double, 4> eps{};
  for (std::size_t lev = 0; lev < eps.size(); ++lev) {
    eps[lev] = detail::kJumpLadderFractions[lev] * scale;
  }
  const detail::SchemeCoefficients sc = detail::scheme_coefficients(sys.cd);
  std::array<detail::FineTable, 4> tables;
  for (std::size_t lev = 0; lev < tables.size(); ++lev) {
    tables[lev] = detail::make_fine_table(sys, h, detail::fine_node_count(sys, eps[lev]));
  }
  std::vector<int> picks;
  for (int i = 0; i < sys.grid.n; i += stride) picks.push_back(i);
  std::vector<double> errs(picks.size(), 0.0);

  auto work = [&](std::size_t idx) {
    const int node = picks[idx];
    const GridNode& g = sys.grid.nodes[static_cast<std::size_t>(node)];
    std::array<Displacement, 4> ladder{};
    for (std::size_t lev = 0; lev < ladder.size(); ++lev) {
      const double e = eps[lev];
      ladder[lev] = detail::eval_from_table(sys, sc, tables[lev], g.r + e * g.phys.n1,
                                            g.z + e * g.phys.n2);
    }
    const Displacement lim = detail::neville_at_zero(eps, ladder);
    const Displacement direct = detail::direct_row_value(sys, h, node);
    errs[idx] = std::max(std::abs(lim.u_r - direct.u_r), std::abs(lim.u_z - direct.u_z));
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp<int>(nthreads, 1, static_cast<int>(picks.size()));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < picks.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = static_cast<std::size_t>(t); i < picks.size();
             i += static_cast<std::size_t>(nthreads)) {
          work(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  double worst = 0.0;
  for (double e : errs) worst = std::max(worst, e);
  return worst;
}

}  // namespace axibie
