#pragma once

// Pointwise curvature quantities of the invariant metric x1 + x2 + x3.
//
// The principal Ricci curvatures of the metric determined by (x1, x2, x3)
// are
//
//   ri = 1/(2 xi) + (ai/2) * ( xi/(xj xk) - xk/(xi xj) - xj/(xi xk) ),
//
// and factor as ri = lambda_i / (2 x1 x2 x3) with the polynomial
//
//   lambda_i = ai (xi^2 - xj^2 - xk^2) + xj xk.
//
// The region R = { all lambda_i > 0 } is where the metric has positive Ricci
// curvature; its boundary pieces are the zero sets of the lambda_i.  The
// volume-like first integral  Vol = x1^(1/a1) x2^(1/a2) x3^(1/a3)  is
// computed in log space to avoid overflow for extreme coordinates.

#include <array>
#include <cmath>
#include <stdexcept>

#include "gwsflow/params.hpp"

namespace gws {

/// An invariant metric, identified with its positive coefficient triple.
struct MetricPoint {
  double x1 = 1, x2 = 1, x3 = 1;

  double operator[](int i) const {
    switch (i) {
      case 0: return x1;
      case 1: return x2;
      case 2: return x3;
      default: throw std::out_of_range("index must be 0, 1, or 2");
    }
  }
  double& operator[](int i) {
    switch (i) {
      case 0: return x1;
      case 1: return x2;
      case 2: return x3;
      default: throw std::out_of_range("index must be 0, 1, or 2");
    }
  }
  std::array<double, 3> array() const { return {x1, x2, x3}; }

  bool operator==(const MetricPoint& o) const = default;
};

/// Throws std::domain_error unless all coordinates are positive (and finite).
inline void require_positive(const MetricPoint& x) {
  for (int i = 0; i < 3; ++i)
    if (!(x[i] > 0) || !std::isfinite(x[i]))
      throw std::domain_error("metric coefficient x" + std::to_string(i + 1) +
                              " must be positive and finite");
}

/// lambda_i = ai (xi^2 - xj^2 - xk^2) + xj xk; same sign as ri.
inline double lambda(const GwsParams& p, const MetricPoint& x, int i) {
  require_positive(x);
  auto [j, k] = cyclic_partners(i);
  return p.a_d(i) * (x[i] * x[i] - x[j] * x[j] - x[k] * x[k]) + x[j] * x[k];
}

/// All three lambda_i.
inline std::array<double, 3> lambdas(const GwsParams& p, const MetricPoint& x) {
  require_positive(x);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = cyclic_partners(i);
    out[i] = p.a_d(i) * (x[i] * x[i] - x[j] * x[j] - x[k] * x[k]) + x[j] * x[k];
  }
  return out;
}

/// Principal Ricci curvatures (r1, r2, r3).
inline std::array<double, 3> principal_ricci(const GwsParams& p, const MetricPoint& x) {
  require_positive(x);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = cyclic_partners(i);
    out[i] = 1 / (2 * x[i]) +
             (p.a_d(i) / 2) * (x[i] / (x[j] * x[k]) - x[k] / (x[i] * x[j]) - x[j] / (x[i] * x[k]));
  }
  return out;
}

/// Scalar curvature S = d1 r1 + d2 r2 + d3 r3 for module dimensions d.
inline double scalar_curvature(const GwsParams& p, const std::array<double, 3>& dims,
                               const MetricPoint& x) {
  auto r = principal_ricci(p, x);
  return dims[0] * r[0] + dims[1] * r[1] + dims[2] * r[2];
}

/// Strict positive-Ricci test: min_i lambda_i > boundary_tol.  The default
/// tolerance 0 makes the boundary count as outside; pass a small positive
/// tolerance to classify near-boundary points conservatively.
inline bool in_region_R(const GwsParams& p, const MetricPoint& x, double boundary_tol = 0.0) {
  auto l = lambdas(p, x);
  return l[0] > boundary_tol && l[1] > boundary_tol && l[2] > boundary_tol;
}

/// ln Vol = sum_i ln(xi)/ai.
inline double log_volume(const GwsParams& p, const MetricPoint& x) {
  require_positive(x);
  return std::log(x.x1) / p.a_d(0) + std::log(x.x2) / p.a_d(1) + std::log(x.x3) / p.a_d(2);
}

/// Vol = x1^(1/a1) x2^(1/a2) x3^(1/a3).  May overflow to +inf / underflow to
/// 0 for extreme coordinates; use log_volume when only comparisons matter.
inline double volume(const GwsParams& p, const MetricPoint& x) {
  return std::exp(log_volume(p, x));
}

/// Scales x onto the unit-volume section: returns s*x with Vol(s*x) = 1,
/// s = Vol(x)^(-omega).  The direction of x is unchanged; idempotent up to
/// round-off.
inline MetricPoint normalize_to_unit_volume(const GwsParams& p, const MetricPoint& x) {
  double s = std::exp(-p.omega_d() * log_volume(p, x));
  return {s * x.x1, s * x.x2, s * x.x3};
}

}  // namespace gws
