#pragma once

// Right-hand side of the normalized Ricci flow on the unit-volume section.
//
//   dxi/dt = fi(x),   fi = -1 - ai xi (qi - qj - qk) + xi B,
//
// with qi = xi/(xj xk) and the normalization term
//
//   B = ( sum_i 1/(ai xi) - sum_i qi ) * omega,   omega = (sum_i 1/ai)^{-1}.
//
// B is chosen so that Vol = x1^(1/a1) x2^(1/a2) x3^(1/a3) is a first
// integral: sum_i fi/(ai xi) = 0 identically.  The flow therefore preserves
// the section Vol = 1, and the planar chart below eliminates x3 through
// x3 = x1^(-a3/a1) x2^(-a3/a2) (the Vol = 1 constraint solved for x3).

#include <array>
#include <cmath>

#include "gwsflow/geometry.hpp"
#include "gwsflow/params.hpp"

namespace gws {

/// fi(x) for i = 1, 2, 3.
inline std::array<double, 3> vector_field(const GwsParams& p, const MetricPoint& x) {
  require_positive(x);
  const std::array<double, 3> a = p.a_d();
  std::array<double, 3> q{};
  double inv_sum = 0, q_sum = 0;
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = cyclic_partners(i);
    q[i] = x[i] / (x[j] * x[k]);
    inv_sum += 1 / (a[i] * x[i]);
    q_sum += q[i];
  }
  const double B = (inv_sum - q_sum) * p.omega_d();
  std::array<double, 3> f{};
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = cyclic_partners(i);
    f[i] = -1 - a[i] * x[i] * (q[i] - q[j] - q[k]) + x[i] * B;
  }
  return f;
}

/// x3 on the unit-volume section as a function of (x1, x2).
inline double volume_section_x3(const GwsParams& p, double x1, double x2) {
  const std::array<double, 3> a = p.a_d();
  return std::exp(-(a[2] / a[0]) * std::log(x1) - (a[2] / a[1]) * std::log(x2));
}

/// Lift of a planar chart point onto the section Vol = 1.
inline MetricPoint volume_section_lift(const GwsParams& p, double x1, double x2) {
  if (!(x1 > 0) || !(x2 > 0)) throw std::domain_error("chart coordinates must be positive");
  return {x1, x2, volume_section_x3(p, x1, x2)};
}

/// Planar reduction of the field: (f1, f2) evaluated on the lifted point.
/// Because Vol is a first integral, trajectories of the reduced system are
/// exactly the projections of trajectories on the section.
inline std::array<double, 2> reduced_field(const GwsParams& p, double x1, double x2) {
  auto f = vector_field(p, volume_section_lift(p, x1, x2));
  return {f[0], f[1]};
}

}  // namespace gws
