#pragma once

// Boundary curves of the positive-Ricci region on the unit-volume section.
//
// On the section Vol = 1, the piece of the boundary where lambda_i vanishes
// (while the other two lambdas stay positive) is a curve r_i with an
// explicit parametrization: put s(t) = t^2 - t/ai + 1 and
//
//   xi = t^(-w/aj) * sqrt(s(t))^(w(1/aj + 1/ak)),
//   xk = xi / sqrt(s(t)),   xj = t * xk,          w = omega,
//
// where (i, j, k) is the cyclic index order.  The parameter is the ratio
// t = xj/xk; it runs over (0, mi) u (Mi, oo) — inside [mi, Mi] the square
// root degenerates, which is exactly where lambda_i cannot vanish.  The two
// components are the "low" (t < mi) and "high" (t > Mi) branches.
//
// Pairs of such curves meet in a single point P_ij = (Phi p0, Psi p0, p0)
// (coordinates listed in (i, j, k) order) where both lambda_i and lambda_j
// vanish; the markers t_ij = Psi(ai, aj) and t_ik = 1/Psi(ai, ak) are the
// parameter values of these corner points on r_i, and the arcs beyond them
// leave the closure of the region.  The "trimmed" branch therefore is
// t in (0, t_ij] (low) and [t_ik, oo) (high).
//
// The diagonal curves I_k = { xi = xj = tau } cross r_i at parameter t = ai.
//
// Along r_i the inner product of the flow field V with the outward-facing
// data of the curve has the closed form
//
//   (V, n_i) = (F(t) - G(t)) / (2 ai t xi^2),
//   F = (aj + ak)(t - 2 ai)(2 ai t - 1),
//   G = (1 - 2 ai) ai (t + 1) sqrt(s(t)),
//
// where n_i is grad lambda_i scaled by the positive factor 1/(2 x1 x2 x3);
// F and G are both positive on the valid t-intervals, so the sign of the
// product — inward (toward positive lambda_i) when positive — is decided by
// F^2 - G^2, a quartic polynomial in t handled in signpoly.hpp.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gwsflow/flow.hpp"
#include "gwsflow/geometry.hpp"
#include "gwsflow/params.hpp"

namespace gws {

/// Component of a boundary curve: t below m_i or above M_i.
enum class Branch { Low, High };

inline const char* to_string(Branch b) { return b == Branch::Low ? "low" : "high"; }

struct PhiPsi {
  double phi, psi;
};

/// Ray coefficients of the double zero { lambda_i = lambda_j = 0 }: the
/// point with (xi, xj, xk) = (phi, psi, 1) * scale kills both lambdas.
/// Evaluated in the cancellation-free form
///   phi = 2 aj (1 - 4 ai^2) / ((1 - 4 ai^2) + sqrt((1 - 4 ai^2)(1 - 4 aj^2)))
/// (and psi with the roles swapped), which degenerates smoothly to
/// (phi, psi) = (aj, ai) at equal parameters.
inline PhiPsi phi_psi(double ai, double aj) {
  if (!(ai > 0 && ai < 0.5 && aj > 0 && aj < 0.5))
    throw std::domain_error("phi_psi: parameters must lie in (0, 1/2)");
  const double di = (1 - 2 * ai) * (1 + 2 * ai);  // 1 - 4 ai^2
  const double dj = (1 - 2 * aj) * (1 + 2 * aj);
  const double root = std::sqrt(di * dj);
  return {2 * aj * di / (di + root), 2 * ai * dj / (dj + root)};
}

/// phi_psi for parameter indices i, j of p.
inline PhiPsi phi_psi(const GwsParams& p, int i, int j) {
  return phi_psi(p.a_d(i), p.a_d(j));
}

namespace detail {
/// s(t) = t^2 - t/ai + 1 with a domain check: valid parameters keep s > 0.
inline double curve_quadratic_checked(const GwsParams& p, int i, double t) {
  if (!(t > 0) || !std::isfinite(t))
    throw std::domain_error("curve parameter t must be positive and finite");
  const double s = (t - 1 / p.a_d(i)) * t + 1;
  // Reject the closed gap [m_i, M_i]; the sign of s alone is ambiguous to
  // round-off exactly at the endpoints.
  if (!(s > 0) || (t >= p.m(i) && t <= p.M(i)))
    throw std::domain_error("curve parameter t = " + std::to_string(t) +
                            " lies in the singular gap [m_i, M_i] = [" + std::to_string(p.m(i)) +
                            ", " + std::to_string(p.M(i)) + "] of index " + std::to_string(i + 1));
  return s;
}
}  // namespace detail

/// Point of the boundary curve r_i at parameter t (throws inside the
/// singular gap).  Lies on { lambda_i = 0, Vol = 1 } by construction.
inline MetricPoint curve_point(const GwsParams& p, int i, double t) {
  auto [j, k] = cyclic_partners(i);
  const double s = detail::curve_quadratic_checked(p, i, t);
  const double w = p.omega_d();
  const double half_log_s = 0.5 * std::log(s);
  const double log_xi = -(w / p.a_d(j)) * std::log(t) + w * (1 / p.a_d(j) + 1 / p.a_d(k)) * half_log_s;
  MetricPoint x;
  x[i] = std::exp(log_xi);
  x[k] = std::exp(log_xi - half_log_s);
  x[j] = t * x[k];
  return x;
}

/// Corner point P_ij where r_i meets r_j (i != j), plus its parameter on
/// r_i.  Symmetric in (i, j) as a point; the parameter refers to the first
/// index's curve.
struct CurveIntersection {
  MetricPoint point;
  double t_on_curve;  // parameter of the corner on r_i
};

inline CurveIntersection intersection_point(const GwsParams& p, int i, int j) {
  if (i == j) throw std::invalid_argument("intersection_point: indices must differ");
  auto [cj, ck] = cyclic_partners(i);
  const int k = (j == cj) ? ck : cj;
  auto [phi, psi] = phi_psi(p, i, j);
  const double w = p.omega_d();
  const double p0 = std::exp(-(w / p.a_d(i)) * std::log(phi) - (w / p.a_d(j)) * std::log(psi));
  MetricPoint x;
  x[i] = phi * p0;
  x[j] = psi * p0;
  x[k] = p0;
  const double t = (j == cj) ? psi : 1 / psi;  // ratio x_cj / x_ck
  return {x, t};
}

/// Parameter values of the two corner points on r_i: t_low = t_ij on the low
/// branch, t_high = t_ik on the high branch.  Branch membership always
/// holds: 0 < t_low < m_i and M_i < t_high.  The sharper bounds a_i <= t_low
/// and t_high <= 1/a_i hold if and only if a_i >= a_j (resp. a_i >= a_k),
/// with equality exactly at equal parameter pairs.
struct TMarkers {
  double t_low, t_high;
};

inline TMarkers t_markers(const GwsParams& p, int i) {
  auto [j, k] = cyclic_partners(i);
  return {phi_psi(p, i, j).psi, 1 / phi_psi(p, i, k).psi};
}

/// Endpoints of a branch as a parameter interval (lo, hi); trimmed = up to
/// the corner point, untrimmed = the full component (0, m_i) or (M_i, oo).
/// The unbounded ends are reported as 0 and +infinity.
inline std::pair<double, double> branch_interval(const GwsParams& p, int i, Branch b,
                                                 bool trimmed = true) {
  auto mk = t_markers(p, i);
  if (b == Branch::Low) return {0.0, trimmed ? mk.t_low : p.m(i)};
  return {trimmed ? mk.t_high : p.M(i), std::numeric_limits<double>::infinity()};
}

/// Diagonal curve I_k = { x_i = x_j = tau } on the unit-volume section.
inline MetricPoint i_curve(const GwsParams& p, int k, double tau) {
  if (!(tau > 0) || !std::isfinite(tau))
    throw std::domain_error("i_curve parameter tau must be positive and finite");
  auto [i, j] = cyclic_partners(k);
  const double c = p.a_d(k) * (1 / p.a_d(i) + 1 / p.a_d(j));
  MetricPoint x;
  x[i] = tau;
  x[j] = tau;
  x[k] = std::exp(-c * std::log(tau));
  return x;
}

/// Crossing of I_k with the boundary curve r_i (i != k): the unique tau_0
/// with lambda_i = 0 on the diagonal, tau_0 = a_i^(1/(1+c)) with
/// c = a_k (1/a_i + 1/a_j).  When i is the cyclic successor of k the
/// crossing lands on the low branch of r_i at parameter t = a_i (there the
/// curve satisfies x_i = x_j); for the other partner the same point sits on
/// the high branch at t = 1/a_i (where x_i = x_k).
struct ICurveCrossing {
  double tau0;
  double t_on_curve;
};

inline ICurveCrossing i_curve_crossing(const GwsParams& p, int k, int i) {
  if (i == k) throw std::invalid_argument("i_curve_crossing: target curve index must differ from k");
  auto [pi, pj] = cyclic_partners(k);
  const int j = (i == pi) ? pj : pi;
  if (i != pi && i != pj) throw std::out_of_range("index must be 0, 1, or 2");
  const double c = p.a_d(k) * (1 / p.a_d(i) + 1 / p.a_d(j));
  const double t = (i == pi) ? p.a_d(i) : 1 / p.a_d(i);
  return {std::exp(std::log(p.a_d(i)) / (1 + c)), t};
}

/// Two-argument form: targets the cyclic successor of k.
inline ICurveCrossing i_curve_crossing(const GwsParams& p, int k) {
  return i_curve_crossing(p, k, cyclic_partners(k).j);
}

/// Gradient of lambda_i in the ambient coordinates (x1, x2, x3):
/// d lambda_i / d xi = 2 ai xi, d/d xj = -2 ai xj + xk, d/d xk = -2 ai xk + xj.
inline std::array<double, 3> grad_lambda(const GwsParams& p, const MetricPoint& x, int i) {
  require_positive(x);
  auto [j, k] = cyclic_partners(i);
  std::array<double, 3> g{};
  g[i] = 2 * p.a_d(i) * x[i];
  g[j] = -2 * p.a_d(i) * x[j] + x[k];
  g[k] = -2 * p.a_d(i) * x[k] + x[j];
  return g;
}

/// The two positive terms of the on-curve product (V, n_i) = (F - G)/(2 ai t xi^2).
struct ProductTerms {
  double F, G, xi;
};

inline ProductTerms field_normal_product_terms(const GwsParams& p, int i, double t) {
  auto [j, k] = cyclic_partners(i);
  const double ai = p.a_d(i);
  const double s = detail::curve_quadratic_checked(p, i, t);
  const double xi = curve_point(p, i, t)[i];
  const double F = (p.a_d(j) + p.a_d(k)) * (t - 2 * ai) * (2 * ai * t - 1);
  const double G = (1 - 2 * ai) * ai * (t + 1) * std::sqrt(s);
  return {F, G, xi};
}

/// Inner product of the flow field with the scaled boundary normal n_i =
/// grad lambda_i / (2 x1 x2 x3) at the curve point r_i(t).  Positive means
/// the flow crosses into the region (lambda_i increasing), negative out.
inline double field_normal_product(const GwsParams& p, int i, double t) {
  auto [F, G, xi] = field_normal_product_terms(p, i, t);
  return (F - G) / (2 * p.a_d(i) * t * xi * xi);
}

/// Angle (degrees) between the flow field and grad lambda_i at r_i(t);
/// below 90 means inward, exactly 90 tangent, above 90 outward.
inline double angle_alpha(const GwsParams& p, int i, double t) {
  const MetricPoint x = curve_point(p, i, t);
  const auto v = vector_field(p, x);
  const auto g = grad_lambda(p, x, i);
  double dot = 0, nv = 0, ng = 0;
  for (int c = 0; c < 3; ++c) {
    dot += v[c] * g[c];
    nv += v[c] * v[c];
    ng += g[c] * g[c];
  }
  double cosine = dot / std::sqrt(nv * ng);
  cosine = std::fmax(-1.0, std::fmin(1.0, cosine));
  return std::acos(cosine) * 180.0 / 3.141592653589793238462643383279502884;
}

/// One sampled point of a boundary branch.
struct CurveSample {
  double t;
  MetricPoint x;
  double product;    // field_normal_product at t
  double alpha_deg;  // angle_alpha at t
};

struct BranchSamplingOptions {
  bool trimmed = true;
  double span_decades = 6.0;  // extent of the grid toward the open end
  double endpoint_guard = 1e-9;  // relative offset from the singular endpoints (untrimmed)
};

/// Log-spaced samples along one branch of r_i, ordered by increasing t.
/// Trimmed branches end (low) / start (high) exactly at the corner marker;
/// untrimmed ones stop short of the singular endpoint by the relative guard.
inline std::vector<CurveSample> boundary_samples(const GwsParams& p, int i, Branch b,
                                                 std::size_t n,
                                                 const BranchSamplingOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("boundary_samples: need at least 2 samples");
  double lo, hi;
  const double span = std::pow(10.0, opts.span_decades);
  if (b == Branch::Low) {
    hi = opts.trimmed ? t_markers(p, i).t_low : p.m(i) * (1 - opts.endpoint_guard);
    lo = hi / span;
  } else {
    lo = opts.trimmed ? t_markers(p, i).t_high : p.M(i) * (1 + opts.endpoint_guard);
    hi = lo * span;
  }
  std::vector<CurveSample> out;
  out.reserve(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (std::size_t s = 0; s < n; ++s) {
    const double t = std::exp(llo + (lhi - llo) * static_cast<double>(s) / static_cast<double>(n - 1));
    out.push_back({t, curve_point(p, i, t), field_normal_product(p, i, t), angle_alpha(p, i, t)});
  }
  return out;
}

}  // namespace gws
