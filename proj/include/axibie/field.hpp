#pragma once
// Interior field evaluation from solved boundary densities.
//
// Displacements come from the layer representation on an upsampled source
// grid sized by the distance to the contour.  Stresses differentiate the
// kernels under the integral sign: every raw kernel atom has analytic d/dr
// and d/dz jets, and the same scheme contraction that produces the
// displacement entries produces their field-point derivatives, so the full
// displacement gradient — and through the constitutive law the stress — is
// available without any finite differencing.
//
// The module also builds manufactured verification cases: an exterior ring
// source placed outside the region generates an exact solution of the field
// equations whose boundary trace can be fed to the solver and whose interior
// values and stresses act as an oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "axibie/bie.hpp"
#include "axibie/contour.hpp"
#include "axibie/errors.hpp"
#include "axibie/material.hpp"
#include "axibie/ring_kernels.hpp"

namespace axibie {

// One evaluated interior point.  near_boundary flags points closer to the
// contour than five mesh widths, where the caller should expect reduced
// accuracy relative to well-separated points; it is advisory, not an error.
struct FieldSample {
  double r = 0.0;
  double z = 0.0;
  Displacement u;
  bool near_boundary = false;
  bool has_stress = false;
  StressSample stress;
};

namespace detail {

// Average meridian mesh spacing L / n of the solver grid.
inline double mesh_width(const NystromGrid& grid) {
  double length = 0.0;
  for (const auto& node : grid.nodes) length += node.phys.speed;
  length *= grid.period / grid.n;
  return length / grid.n;
}

// Value, d/dr and d/dz atom sets of both branches at one (field, source)
// pair.  The z-derivatives pick up one factor of the branch stretch because
// the field point enters the kernels through (r, lambda_k z).
struct AtomJets {
  std::array<AtomSet, 2> value{}, d_r{}, d_z{};
};

inline AtomJets atom_jets(const CharacteristicData& cd, double r, double z, const GridNode& src) {
  AtomJets aj;
  const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
  for (int k = 0; k < 2; ++k) {
    const double lam = lambda[static_cast<std::size_t>(k)];
    const FieldPoint p{r, lam * z};
    const RingPole q{src.r, lam * src.z};
    const KernelJet w0 = w0_jet(p, q);
    const KernelJet w1 = w1_jet(p, q);
    const W1FJet f = w1f_jet(p, q);
    aj.value[static_cast<std::size_t>(k)] = {w0.d_r, w0.d_z, w1.d_z, f.value};
    aj.d_r[static_cast<std::size_t>(k)] = {w0.d_rr, w0.d_rz, w1.d_rz, f.d_r};
    aj.d_z[static_cast<std::size_t>(k)] = {lam * w0.d_rz, lam * w0.d_zz, lam * w1.d_zz,
                                           lam * f.d_z};
  }
  return aj;
}

struct FieldGradients {
  Displacement u;
  double dur_dr = 0.0, dur_dz = 0.0, duz_dr = 0.0, duz_dz = 0.0;
};

inline FieldGradients eval_gradients_from_table(const BieSystem& sys, const SchemeCoefficients& sc,
                                                const FineTable& t, double r, double z) {
  const double jac = sys.grid.period / (2.0 * std::numbers::pi);
  const double w = 2.0 * std::numbers::pi / t.nf;
  FieldGradients g;
  for (int q = 0; q < t.nf; ++q) {
    const GridNode& src = t.nodes[static_cast<std::size_t>(q)];
    const AtomJets aj = atom_jets(sys.cd, r, z, src);
    const BlockEntries ev = contract(sys.scheme, sc, aj.value, src, jac);
    const BlockEntries er = contract(sys.scheme, sc, aj.d_r, src, jac);
    const BlockEntries ez = contract(sys.scheme, sc, aj.d_z, src, jac);
    const double h1 = t.h1[static_cast<std::size_t>(q)];
    const double h2 = t.h2[static_cast<std::size_t>(q)];
    g.u.u_r += w * (ev.k11 * h1 + ev.k12 * h2);
    g.u.u_z += w * (ev.k21 * h1 + ev.k22 * h2);
    g.dur_dr += w * (er.k11 * h1 + er.k12 * h2);
    g.duz_dr += w * (er.k21 * h1 + er.k22 * h2);
    g.dur_dz += w * (ez.k11 * h1 + ez.k12 * h2);
    g.duz_dz += w * (ez.k21 * h1 + ez.k22 * h2);
  }
  return g;
}

// Shared preamble of the two field operations: admission checks plus the
// evaluation strategy.  Points so close to the contour that the adaptive
// quadrature caps out fall back to the boundary limit at the nearest node,
// which the jump relation identifies with the collocated matrix value.
struct EvalPlan {
  double distance = 0.0;
  bool near_boundary = false;
  bool use_node_limit = false;
  int nearest_node = 0;
  int fine_nodes = 0;
};

inline EvalPlan plan_interior_eval(const BieSystem& sys, const DensityPair& h, double r,
                                   double z) {
  if (static_cast<int>(h.h1.size()) != sys.grid.n ||
      static_cast<int>(h.h2.size()) != sys.grid.n) {
    throw ConfigError("density length must match the grid");
  }
  if (!std::isfinite(r) || !std::isfinite(z) || !(r >= 0.0)) {
    throw err_invalid_parameter("field point must be finite with r >= 0");
  }
  if (!sys.contour.contains(r, z)) {
    throw err_point_outside("evaluation point lies on or outside the contour");
  }
  EvalPlan plan;
  plan.distance = sys.contour.nearest_distance(r, z);
  if (!(plan.distance > 0.0)) {
    throw err_point_outside("evaluation point lies on the contour");
  }
  plan.near_boundary = plan.distance < 5.0 * mesh_width(sys.grid);
  plan.fine_nodes = fine_node_count(sys, plan.distance);
  if (plan.fine_nodes >= kFineNodeCap) {
    plan.use_node_limit = true;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < sys.grid.n; ++j) {
      const GridNode& node = sys.grid.nodes[static_cast<std::size_t>(j)];
      const double d2 = (node.r - r) * (node.r - r) + (node.z - z) * (node.z - z);
      if (d2 < best) {
        best = d2;
        plan.nearest_node = j;
      }
    }
  }
  return plan;
}

}  // namespace detail

// Displacement at a strictly interior point.
inline FieldSample displacement(const BieSystem& sys, const DensityPair& h, double r, double z) {
  const detail::EvalPlan plan = detail::plan_interior_eval(sys, h, r, z);
  FieldSample out;
  out.r = r;
  out.z = z;
  out.near_boundary = plan.near_boundary;
  if (plan.use_node_limit) {
    out.u = detail::direct_row_value(sys, h, plan.nearest_node);
  } else {
    out.u = layer_displacement(sys, h, r, z, plan.fine_nodes);
  }
  if (r == 0.0) out.u.u_r = 0.0;
  return out;
}

// Displacement plus stresses at a strictly interior point.  The material must
// be the one the system was assembled for.
inline FieldSample stress(const BieSystem& sys, const DensityPair& h,
                          const ElasticConstants& material, double r, double z) {
  const CharacteristicData check = characteristic_data(material);
  if (std::abs(check.lambda1 - sys.cd.lambda1) > 1e-10 * sys.cd.lambda1 ||
      std::abs(check.lambda2 - sys.cd.lambda2) > 1e-10 * sys.cd.lambda2) {
    throw ConfigError("material does not match the assembled system");
  }
  const detail::EvalPlan plan = detail::plan_interior_eval(sys, h, r, z);
  const detail::SchemeCoefficients sc = detail::scheme_coefficients(sys.cd);
  const detail::FineTable t = detail::make_fine_table(sys, h, plan.fine_nodes);
  const detail::FieldGradients g = detail::eval_gradients_from_table(sys, sc, t, r, z);

  FieldSample out;
  out.r = r;
  out.z = z;
  out.near_boundary = plan.near_boundary;
  out.u = g.u;
  if (r == 0.0) out.u.u_r = 0.0;
  DisplacementGradientSample du;
  du.dur_dr = g.dur_dr;
  du.ur_over_r = r > 0.0 ? g.u.u_r / r : g.dur_dr;
  du.duz_dz = g.duz_dz;
  du.dur_dz = g.dur_dz;
  du.duz_dr = g.duz_dr;
  out.has_stress = true;
  out.stress = stresses_from_fields(material, sys.cd, du);
  return out;
}

// Exact exterior-source verification case.  phi_k = c_k w0(r, lambda_k z;
// a0, lambda_k z0) solves the k-th potential equation; the derived
// displacement field solves the full system, and its trace on the contour is
// admissible boundary data whose solution the oracle then checks pointwise.
struct ManufacturedCase {
  RingPole pole{1.0, 0.0};
  std::array<double, 2> coeffs{};
  ElasticConstants material;
  CharacteristicData cd;
  std::vector<double> g1, g2;
  double trace_sup = 0.0;

  Displacement displacement(double r, double z) const {
    Displacement u;
    const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
    const std::array<double, 2> kk{cd.k1, cd.k2};
    for (int k = 0; k < 2; ++k) {
      const double lam = lambda[static_cast<std::size_t>(k)];
      const KernelJet jet = w0_jet({r, lam * z}, {pole.a, lam * pole.zeta});
      u.u_r += coeffs[static_cast<std::size_t>(k)] * jet.d_r;
      u.u_z += coeffs[static_cast<std::size_t>(k)] * kk[static_cast<std::size_t>(k)] * lam * jet.d_z;
    }
    return u;
  }

  DisplacementGradientSample gradients(double r, double z) const {
    DisplacementGradientSample du;
    double u_r = 0.0;
    const std::array<double, 2> lambda{cd.lambda1, cd.lambda2};
    const std::array<double, 2> kk{cd.k1, cd.k2};
    for (int k = 0; k < 2; ++k) {
      const double c = coeffs[static_cast<std::size_t>(k)];
      const double lam = lambda[static_cast<std::size_t>(k)];
      const double kf = kk[static_cast<std::size_t>(k)];
      const KernelJet jet = w0_jet({r, lam * z}, {pole.a, lam * pole.zeta});
      u_r += c * jet.d_r;
      du.dur_dr += c * jet.d_rr;
      du.dur_dz += c * lam * jet.d_rz;
      du.duz_dr += c * kf * lam * jet.d_rz;
      du.duz_dz += c * kf * lam * lam * jet.d_zz;
    }
    du.ur_over_r = r > 0.0 ? u_r / r : du.dur_dr;
    return du;
  }

  StressSample stress(double r, double z) const {
    return stresses_from_fields(material, cd, gradients(r, z));
  }
};

inline ManufacturedCase manufactured_case(const RingPole& pole,
                                          const std::array<double, 2>& coeffs,
                                          const BieSystem& sys, const ElasticConstants& material) {
  if (!(pole.a > 0.0) || !std::isfinite(pole.a) || !std::isfinite(pole.zeta)) {
    throw err_invalid_parameter("source ring must have finite radius > 0");
  }
  if (sys.contour.contains(pole.a, pole.zeta)) {
    throw err_pole_inside_region("source ring lies inside the region");
  }
  const double margin = sys.contour.nearest_distance(pole.a, pole.zeta);
  if (!(margin >= 0.1 * sys.contour.scale())) {
    throw err_pole_inside_region("source ring too close to the contour (margin " +
                                 std::to_string(margin) + ")");
  }
  ManufacturedCase mc;
  mc.pole = pole;
  mc.coeffs = coeffs;
  mc.material = material;
  mc.cd = sys.cd;
  mc.g1.reserve(static_cast<std::size_t>(sys.grid.n));
  mc.g2.reserve(static_cast<std::size_t>(sys.grid.n));
  for (const auto& node : sys.grid.nodes) {
    const Displacement u = mc.displacement(node.r, node.z);
    mc.g1.push_back(u.u_r);
    mc.g2.push_back(u.u_z);
    mc.trace_sup = std::max({mc.trace_sup, std::abs(u.u_r), std::abs(u.u_z)});
  }
  return mc;
}

}  // namespace axibie
