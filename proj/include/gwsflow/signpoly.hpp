#pragma once

// Sign analysis of the flow across the boundary curves r_i.
//
// On the branch parametrization of r_i, the sign of the inner product
// between the flow field and the inward normal coincides with the sign of
// the palindromic quartic
//
//   h(t) = c0 t^4 + c1 t^3 + c2 t^2 + c1 t + c0,
//
// whose coefficients are explicit polynomials in (a_i, a_j + a_k).  The
// substitution y = t + 1/t reduces h to the quadratic
// p(y) = c0 y^2 + c1 y + (c2 - 2 c0), and every root y0 > 1/a_i of p
// produces the reciprocal pair t = (y0 -+ sqrt(y0^2 - 4))/2, one root in
// (0, m_i) and one in (M_i, oo).  All case splits (coefficient signs,
// discriminant sign, root-versus-1/a_i comparisons) are decided in exact
// rational arithmetic; floating point enters only when the root values are
// finally materialized.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwsflow/boundary.hpp"
#include "gwsflow/params.hpp"

namespace gws {

struct HCoefficients {
  Rational c0;
  Rational c1;
  Rational c2;
};

/// Exact coefficients of h(t) for the curve r_i.
///   c0 = a_i^2 (1 - 2a_i + 2(a_j+a_k)) (2a_i + 2(a_j+a_k) - 1)
///   c1 = a_i (1 - 2a_i)^3 - 4 a_i (4a_i^2 + 1) (a_j+a_k)^2
///   c2 = (16a_i^4 + 16a_i^2 + 1)(a_j+a_k)^2 + 2 a_i (1 - a_i)(1 - 2a_i)^2
/// The second factor of c0 equals 2*theta, so sign(c0) = sign(theta).
inline HCoefficients h_coefficients(const GwsParams& p, int i) {
  const auto [j, k] = cyclic_partners(i);
  const Rational& ai = p.a(i);
  const Rational s = p.a(j) + p.a(k);
  const Rational one_m_2a = 1 - 2 * ai;
  HCoefficients c;
  c.c0 = ai * ai * (one_m_2a + 2 * s) * (2 * ai + 2 * s - 1);
  c.c1 = ai * one_m_2a * one_m_2a * one_m_2a - 4 * ai * (4 * ai * ai + 1) * s * s;
  c.c2 = (16 * ai * ai * ai * ai + 16 * ai * ai + 1) * s * s +
         2 * ai * (1 - ai) * one_m_2a * one_m_2a;
  return c;
}

/// Horner evaluation of h(t) in binary64.
inline double h_value(const HCoefficients& c, double t) {
  const double c0 = to_double(c.c0);
  const double c1 = to_double(c.c1);
  const double c2 = to_double(c.c2);
  return (((c0 * t + c1) * t + c2) * t + c1) * t + c0;
}

/// Exact evaluation of h at a rational argument.
inline Rational h_value_exact(const HCoefficients& c, const Rational& t) {
  return (((c.c0 * t + c.c1) * t + c.c2) * t + c.c1) * t + c.c0;
}

/// The reduced quadratic p(y) = a2 y^2 + a1 y + a0 with y = t + 1/t,
/// satisfying h(t) = t^2 * p(t + 1/t).
struct PQuadratic {
  Rational a2;  // = c0
  Rational a1;  // = c1
  Rational a0;  // = c2 - 2 c0
};

inline PQuadratic p_reduce(const HCoefficients& c) {
  return {c.c0, c.c1, c.c2 - 2 * c.c0};
}

inline double p_value(const PQuadratic& q, double y) {
  return (to_double(q.a2) * y + to_double(q.a1)) * y + to_double(q.a0);
}

/// Exact discriminant of p(y): D_i = c1^2 - 4 c0 (c2 - 2 c0).
inline Rational discriminant_exact(const HCoefficients& c) {
  return c.c1 * c.c1 - 4 * c.c0 * (c.c2 - 2 * c.c0);
}

/// The same discriminant expressed through theta = a1+a2+a3 - 1/2:
///   D_i = -4 a^2 (1+2a)^2 (1-2a)^3 * [ (1+2a) theta^2 + (1-4a^2) theta - (1-2a) a^2 ].
/// The bracketed quadratic in theta has theta_i as its unique positive root,
/// so for theta > 0:  D_i < 0 iff theta > theta_i, D_i = 0 iff theta = theta_i.
inline Rational discriminant_Di_exact(const Rational& ai, const Rational& theta) {
  if (!(ai > 0 && 2 * ai < 1)) throw std::domain_error("discriminant_Di: a must lie in (0, 1/2)");
  const Rational om = 1 - 2 * ai;
  const Rational op = 1 + 2 * ai;
  const Rational bracket = op * theta * theta + (1 - 4 * ai * ai) * theta - om * ai * ai;
  return -4 * ai * ai * op * op * om * om * om * bracket;
}

inline double discriminant_Di(const Rational& ai, const Rational& theta) {
  return to_double(discriminant_Di_exact(ai, theta));
}

/// One real root of h, tagged with the branch interval that contains it.
struct HRoot {
  double t = 0.0;
  int multiplicity = 1;
  Branch branch = Branch::Low;
};

struct SignPoly {
  int i = 0;
  Rational c0;
  Rational c1;
  Rational c2;
  std::vector<HRoot> roots;  // ascending in t
};

namespace detail {

// Exact test "y > 1/a" for the quadratic root y = (-c1 + s*sqrt(D)) / (2 c0),
// s in {+1, -1}, assuming c0 != 0 and D > 0.
inline bool quadratic_root_exceeds(const HCoefficients& c, const Rational& D,
                                   const Rational& inv_a, int s) {
  // y > 1/a  <=>  s*sqrt(D) > R  (c0 > 0)  or  s*sqrt(D) < R  (c0 < 0),
  // where R = 2 c0 / a + c1.
  const Rational R = 2 * c.c0 * inv_a + c.c1;
  const int sR = sgn(R);
  const Rational R2 = R * R;
  if (sgn(c.c0) > 0) {
    if (s > 0) return sR < 0 || D > R2;
    return sR < 0 && D < R2;
  }
  if (s > 0) return sR > 0 && D < R2;
  return sR > 0 || D > R2;
}

}  // namespace detail

/// All real roots of h in (0, m_i) u (M_i, oo), with multiplicities.
/// Root counts follow the exact case analysis:
///   sum <= 1/2            -> one reciprocal pair of simple roots;
///   sum >  1/2, D_i < 0   -> no roots (h > 0 everywhere);
///   sum >  1/2, D_i = 0   -> one reciprocal pair of double roots;
///   sum >  1/2, D_i > 0   -> two reciprocal pairs of simple roots.
inline SignPoly roots_h(const GwsParams& p, int i) {
  const HCoefficients c = h_coefficients(p, i);
  SignPoly sp;
  sp.i = i;
  sp.c0 = c.c0;
  sp.c1 = c.c1;
  sp.c2 = c.c2;
  const Rational inv_a = 1 / p.a(i);

  const auto push_pair = [&sp](double y, int mult) {
    // y > 2 here, so the radical is well-conditioned.
    const double rad = std::sqrt(std::max(y * y - 4.0, 0.0));
    const double t_high = 0.5 * (y + rad);
    sp.roots.push_back({1.0 / t_high, mult, Branch::Low});
    sp.roots.push_back({t_high, mult, Branch::High});
  };

  const int s0 = sgn(c.c0);
  if (s0 == 0) {
    // p(y) degenerates to the linear function c1 y + c2 with c1 < 0.
    assert(sgn(c.c1) < 0);
    const Rational y0 = -c.c2 / c.c1;
    if (y0 > inv_a) push_pair(to_double(y0), 1);
  } else {
    const Rational D = discriminant_exact(c);
    const int sD = sgn(D);
    if (sD == 0) {
      const Rational y0 = -c.c1 / (2 * c.c0);
      if (y0 > inv_a) push_pair(to_double(y0), 2);
    } else if (sD > 0) {
      const double A = to_double(c.c0);
      const double B = to_double(c.c1);
      const double C = to_double(c.c2 - 2 * c.c0);  // > 0 always
      const double sqD = std::sqrt(to_double(D));
      // Cancellation-free evaluation: take the root whose numerator adds in
      // magnitude, recover the mate through the product C/A.
      double y_plus, y_minus;  // y_plus = (-B + sqD)/(2A), y_minus = (-B - sqD)/(2A)
      if (B <= 0) {
        y_plus = (-B + sqD) / (2 * A);
        y_minus = (C / A) / y_plus;
      } else {
        y_minus = (-B - sqD) / (2 * A);
        y_plus = (C / A) / y_minus;
      }
      if (detail::quadratic_root_exceeds(c, D, inv_a, +1)) push_pair(y_plus, 1);
      if (detail::quadratic_root_exceeds(c, D, inv_a, -1)) push_pair(y_minus, 1);
    }
    // sD < 0: h > 0 on the whole real line, no roots.
  }
  std::sort(sp.roots.begin(), sp.roots.end(),
            [](const HRoot& a, const HRoot& b) { return a.t < b.t; });
  return sp;
}

/// Qualitative behaviour of the flow across one trimmed branch of r_i,
/// read while walking away from the corner point (descending t on the low
/// branch, ascending t on the high branch).
enum class Scenario {
  NoExit,          // field points into the region along the whole branch
  ExitOnly,        // field points out of the region along the whole branch
  EnterThenExit,   // inward near the corner, outward past a simple root
  ExitThenEnter,   // outward near the corner, inward past a simple root
  EnterExitEnter,  // inward, outward between two simple roots, inward again
  TouchOnly,       // inward everywhere except tangency at a double root
};

inline std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::NoExit: return "NoExit";
    case Scenario::ExitOnly: return "ExitOnly";
    case Scenario::EnterThenExit: return "EnterThenExit";
    case Scenario::ExitThenEnter: return "ExitThenEnter";
    case Scenario::EnterExitEnter: return "EnterExitEnter";
    case Scenario::TouchOnly: return "TouchOnly";
  }
  return "?";
}

/// Maximal t-interval on which the field keeps one crossing direction.
/// t_hi is +infinity for the last segment of the high branch.
struct FlowSegment {
  double t_lo;
  double t_hi;
  bool inward;
};

struct CrossingScenario {
  int i = 0;
  Branch branch = Branch::Low;
  Scenario kind = Scenario::NoExit;
  double t_corner = 0.0;          // trimmed endpoint: t_ij (low) or t_ik (high)
  std::vector<HRoot> roots;       // h-roots inside the trimmed interval, ascending
  std::vector<FlowSegment> segments;  // ascending in t, covering the trimmed interval
};

inline CrossingScenario crossing_scenario(const GwsParams& p, int i, Branch b) {
  const SignPoly sp = roots_h(p, i);
  const TMarkers tm = t_markers(p, i);

  CrossingScenario cs;
  cs.i = i;
  cs.branch = b;
  cs.t_corner = (b == Branch::Low) ? tm.t_low : tm.t_high;

  // Sign of h at the far end of the branch (t -> 0+ or t -> oo): the
  // constant/leading coefficient c0, falling back to c1 (< 0) when c0 = 0.
  int far = sgn(sp.c0);
  if (far == 0) far = sgn(sp.c1);
  assert(far != 0);

  // Roots on this branch, ascending, and the sign of h on the gaps between
  // them over the full (untrimmed) branch interval.
  std::vector<HRoot> br;
  for (const HRoot& r : sp.roots)
    if (r.branch == b) br.push_back(r);
  std::vector<int> gap_sign(br.size() + 1, 0);
  if (b == Branch::Low) {
    gap_sign.front() = far;  // segment touching t -> 0+
    for (std::size_t n = 0; n < br.size(); ++n)
      gap_sign[n + 1] = (br[n].multiplicity % 2 != 0) ? -gap_sign[n] : gap_sign[n];
  } else {
    gap_sign.back() = far;  // segment touching t -> oo
    for (std::size_t n = br.size(); n-- > 0;)
      gap_sign[n] = (br[n].multiplicity % 2 != 0) ? -gap_sign[n + 1] : gap_sign[n + 1];
  }

  // Trim to (0, t_ij] or [t_ik, oo) and emit segments in ascending t.
  const double inf = std::numeric_limits<double>::infinity();
  bool touch_inside = false;
  if (b == Branch::Low) {
    double lo = 0.0;
    for (std::size_t n = 0; n < br.size(); ++n) {
      if (br[n].t >= cs.t_corner) break;
      cs.roots.push_back(br[n]);
      if (br[n].multiplicity % 2 == 0) touch_inside = true;
      cs.segments.push_back({lo, br[n].t, gap_sign[n] > 0});
      lo = br[n].t;
    }
    cs.segments.push_back({lo, cs.t_corner, gap_sign[cs.roots.size()] > 0});
  } else {
    std::size_t first = 0;
    while (first < br.size() && br[first].t <= cs.t_corner) ++first;
    double lo = cs.t_corner;
    for (std::size_t n = first; n < br.size(); ++n) {
      cs.roots.push_back(br[n]);
      if (br[n].multiplicity % 2 == 0) touch_inside = true;
      cs.segments.push_back({lo, br[n].t, gap_sign[n] > 0});
      lo = br[n].t;
    }
    cs.segments.push_back({lo, inf, gap_sign.back() > 0});
  }

  // Read the crossing directions walking away from the corner and compress
  // runs preserved across even-multiplicity roots.
  std::vector<bool> seq;
  if (b == Branch::Low) {
    for (auto it = cs.segments.rbegin(); it != cs.segments.rend(); ++it)
      if (seq.empty() || seq.back() != it->inward) seq.push_back(it->inward);
  } else {
    for (const FlowSegment& s : cs.segments)
      if (seq.empty() || seq.back() != s.inward) seq.push_back(s.inward);
  }

  if (seq.size() == 1) {
    if (seq[0]) {
      cs.kind = touch_inside ? Scenario::TouchOnly : Scenario::NoExit;
    } else {
      assert(!touch_inside);  // tangency only occurs with h >= 0
      cs.kind = Scenario::ExitOnly;
    }
  } else if (seq.size() == 2) {
    cs.kind = seq[0] ? Scenario::EnterThenExit : Scenario::ExitThenEnter;
  } else {
    assert(seq.size() == 3 && seq[0] && !seq[1] && seq[2]);
    cs.kind = Scenario::EnterExitEnter;
  }
  return cs;
}

}  // namespace gws
