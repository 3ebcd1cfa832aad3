#pragma once

// Classification of parameter triples by the fate of the positive-Ricci
// region R under the flow.
//
// Everything hinges on theta = a1 + a2 + a3 - 1/2 and the per-index caps
// theta_i (see params.hpp).  Three regimes:
//
//   * SomeLose:      theta <= 0.  The far ends of every boundary branch
//     point outward, some metrics in R acquire mixed curvature, and no
//     trajectory that leaves R ever returns.
//   * AllPreserved:  theta > 0 and theta >= theta_i for every i.  All
//     boundary crossings are inward (tangencies allowed), so R is invariant.
//   * SomePreserved: theta > 0 but theta < theta_i for some i.  The faces
//     with theta < theta_i carry a middle window of outward crossings while
//     the rest of the boundary still flows inward.
//
// For rational parameters each comparison is decided exactly: theta >= theta_i
// reduces to 4(aj+ak)^2 (1+2ai) >= 1-2ai over the rationals (the radical in
// theta_i never appears).
//
// The second half of the header specializes to the one-parameter family
//   a1 = k/(2s), a2 = l/(2s), a3 = m/(2s),   s = k+l+m-2,
// with integers k >= l >= m >= 1 (the so(k+l+m) spaces).  There theta = 1/s,
// the binding cap is the one attached to k, and the comparison collapses to
// the sign of the palindrome-free quadratic
//   T(theta) = k(k-2)^2 theta^2 - (k^2-4) theta + 4.
// Its roots are real iff d = k^2-12k+4 >= 0, i.e. k >= 12, and then both lie
// in (0, 1/k]; written back in terms of l+m, the verdict is controlled by two
// thresholds X(k) < Y(k): the class is preserved exactly when k <= 11, or
// l+m <= X(k), or l+m >= Y(k).  All integer comparisons against X and Y are
// done by clearing sqrt(d) with sign bookkeeping, never through binary64,
// so boundary cases such as l+m = Y(12) = 10 cannot flip on rounding.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwsflow/params.hpp"
#include "gwsflow/rational.hpp"

namespace gws {

// ---------------------------------------------------------------------------
// Generic verdict
// ---------------------------------------------------------------------------

enum class Outcome {
  SomeLose,       ///< sum <= 1/2: positive Ricci curvature is lost by some metrics
  AllPreserved,   ///< theta >= theta_i for all i: R is flow-invariant
  SomePreserved,  ///< theta > 0 but below some cap: R leaks through part of its boundary
};

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::SomeLose: return "SomeLose";
    case Outcome::AllPreserved: return "AllPreserved";
    case Outcome::SomePreserved: return "SomePreserved";
  }
  return "?";
}

/// Classification result with the comparisons that witness it.
///
/// cap_sign[i] is the sign of theta - theta_i and sum_sign the sign of
/// theta itself; for exact parameters both are decided over the rationals.
/// exit_indices lists the indices whose boundary face admits outward
/// crossings: all three when theta <= 0 (the far ends of every branch point
/// outward), the set {i : theta < theta_i} when theta > 0, and empty
/// exactly in the AllPreserved case.
struct Verdict {
  Outcome outcome = Outcome::SomeLose;
  int sum_sign = 0;                ///< sign of a1+a2+a3 - 1/2
  std::array<int, 3> cap_sign{};   ///< sign of theta - theta_i, i = 0,1,2
  std::vector<int> exit_indices;   ///< faces with an outward window
  bool exact = true;               ///< comparisons decided over the rationals
  bool inexact_tie = false;        ///< some binary64 comparison fell in the tie band
};

/// The preservation criterion for one index: theta >= theta_i, decided
/// exactly for rational parameters via
///   4 (aj+ak)^2 (1+2ai) >= 1-2ai.
/// Inexact parameters fall back to binary64 with the tie band of
/// GwsParams::theta_vs_cap; a tie counts as satisfied.
inline bool rational_condition(const GwsParams& p, int i) { return p.theta_vs_cap(i) >= 0; }

/// Full classification of a parameter triple.  For inexact parameters any
/// comparison landing inside the tie band sets inexact_tie; ties resolve
/// toward equality (theta = theta_i keeps the face inward-only, theta = 0
/// belongs to the SomeLose side).
inline Verdict verdict(const GwsParams& p) {
  Verdict v;
  v.exact = p.exact();
  v.sum_sign = p.theta_sign();
  for (int i = 0; i < 3; ++i) v.cap_sign[i] = p.theta_vs_cap(i);
  if (!v.exact) {
    v.inexact_tie = v.sum_sign == 0 ||
                    std::any_of(v.cap_sign.begin(), v.cap_sign.end(), [](int s) { return s == 0; });
  }
  if (v.sum_sign <= 0) {
    v.outcome = Outcome::SomeLose;
    v.exit_indices = {0, 1, 2};
  } else {
    for (int i = 0; i < 3; ++i)
      if (v.cap_sign[i] < 0) v.exit_indices.push_back(i);
    v.outcome = v.exit_indices.empty() ? Outcome::AllPreserved : Outcome::SomePreserved;
  }
  return v;
}

// ---------------------------------------------------------------------------
// theta_i as a function of one parameter, and its maximum
// ---------------------------------------------------------------------------

/// theta_i as a function of a single parameter a in (0, 1/2):
///   a - 1/2 + sqrt((1-2a)/(1+2a))/2,
/// evaluated cancellation-free as 2 a^2 u / ((1+u)(1+2a)) with u = sqrt(1-4a^2).
inline double theta_cap_value(double a) {
  if (!(a > 0 && a < 0.5)) throw std::domain_error("theta_cap_value: a must lie in (0, 1/2)");
  const double u = std::sqrt((1 - 2 * a) * (1 + 2 * a));
  return 2 * a * a * u / ((1 + u) * (1 + 2 * a));
}

/// Maximizer of theta_cap_value on (0, 1/2).
struct ThetaStar {
  double a;      ///< argmax, ~0.4196433778
  double value;  ///< theta_i there, ~0.067442248
};

/// Closed form of the maximum of a -> theta_i(a): with
/// mu = cbrt(19 + 3 sqrt(33)), the argmax is a* = (mu^2 - 2 mu + 4)/(6 mu),
/// the unique root of the derivative in (0, 1/2); theta* = theta_i(a*).
/// No cap can exceed theta* ~ 0.0674, so theta >= 0.0675 certifies
/// AllPreserved regardless of the individual parameters.
inline ThetaStar theta_star() {
  const double mu = std::cbrt(19.0 + 3.0 * std::sqrt(33.0));
  const double a = (mu * mu - 2.0 * mu + 4.0) / (6.0 * mu);
  return {a, theta_cap_value(a)};
}

// ---------------------------------------------------------------------------
// The so(k+l+m) family: T(theta), Sturm counts, X/Y thresholds
// ---------------------------------------------------------------------------

/// Coefficients of T(theta) = k(k-2)^2 theta^2 - (k^2-4) theta + 4 as exact
/// rationals (integers, in fact).
struct TPoly {
  Rational a2, a1, a0;
};

inline TPoly T_poly(long long k) {
  if (k < 1) throw std::domain_error("T_poly: k must be a positive integer");
  const BigInt kk(k);
  return {Rational(kk * (kk - 2) * (kk - 2)), Rational(-(kk * kk - 4)), Rational(4)};
}

inline Rational T_value(const TPoly& T, const Rational& theta) {
  return (T.a2 * theta + T.a1) * theta + T.a0;
}

/// Number of real roots of T in (0, 1/k], by Sturm's method over exact
/// rationals: sign-variation difference of the chain (T, T', -rem(T, T'))
/// at the endpoints.  Neither endpoint is ever a root (T(0) = 4 and
/// T(1/k) = 8/k).  Returns 0 for k <= 11 (negative discriminant; k = 2
/// degenerates to the constant 4) and 2 for k >= 12.
inline int sturm_count(long long k) {
  const TPoly T = T_poly(k);
  if (sgn(T.a2) == 0) return 0;  // k = 2: T == 4 identically
  const Rational &A = T.a2, &B = T.a1, &C = T.a0;
  const Rational f2 = B * B / (4 * A) - C;  // -remainder(T, T'), a constant
  const auto variations = [&](const Rational& t) {
    const std::array<int, 3> s = {sgn((A * t + B) * t + C), sgn(2 * A * t + B), sgn(f2)};
    int v = 0, prev = 0;
    for (int si : s) {
      if (si == 0) continue;
      if (prev != 0 && si != prev) ++v;
      prev = si;
    }
    return v;
  };
  return variations(Rational(0)) - variations(Rational(1, k));
}

namespace detail {
inline void require_threshold_k(long long k, const char* who) {
  if (k < 12)
    throw std::domain_error(std::string(who) +
                            ": needs k >= 12 (the discriminant k^2-12k+4 is negative below)");
}
}  // namespace detail

/// The two roots 0 < lo < hi < 1/k of T for k >= 12:
///   (k+2 -+ sqrt(k^2-12k+4)) / (2k(k-2)).
/// hi is computed from the quadratic formula (no cancellation: sqrt(d) < k+2)
/// and lo through the root product 4/(k(k-2)^2).  Throws for k < 12.
struct ThetaCaps {
  double lo, hi;
};

inline ThetaCaps theta_caps(long long k) {
  detail::require_threshold_k(k, "theta_caps");
  const double kd = static_cast<double>(k);
  const double sd = std::sqrt(kd * kd - 12 * kd + 4);
  const double hi = (kd + 2 + sd) / (2 * kd * (kd - 2));
  return {4 / (kd * (kd - 2) * (kd - 2) * hi), hi};
}

/// X(k) = 2k(k-2)/(k+2+sqrt(d)) - (k-2), the lower l+m threshold; equal to
/// 1/hi - (k-2) for the caps above.  Strictly decreasing, X(12) = 5 exactly,
/// and 2 < X(k) < 3 from k = 17 on.  Throws for k < 12.
inline double X_of(long long k) {
  detail::require_threshold_k(k, "X_of");
  const double kd = static_cast<double>(k);
  const double sd = std::sqrt(kd * kd - 12 * kd + 4);
  return 2 * kd * (kd - 2) / (kd + 2 + sd) - (kd - 2);
}

/// Y(k) = 2k(k-2)/(k+2-sqrt(d)) - (k-2), the upper l+m threshold; strictly
/// increasing, Y(12) = 10 and Y(15) = 26 exactly, and Y(k) > 2k for k >= 17
/// (so no admissible pair l, m <= k can reach it).  Throws for k < 12.
inline double Y_of(long long k) {
  detail::require_threshold_k(k, "Y_of");
  const double kd = static_cast<double>(k);
  const double sd = std::sqrt(kd * kd - 12 * kd + 4);
  return 2 * kd * (kd - 2) / (kd + 2 - sd) - (kd - 2);
}

/// Exact test of l+m <= X(k).  With s = k+l+m-2 the inequality clears to
///   s sqrt(d) <= L,  L = 2k(k-2) - s(k+2),  d = k^2-12k+4,
/// so (s > 0, d >= 0) it holds iff L >= 0 and L^2 >= s^2 d.  Requires
/// k >= 12 and l+m >= 2.
inline bool sum_le_X(long long k, long long lm) {
  detail::require_threshold_k(k, "sum_le_X");
  if (lm < 2) throw std::domain_error("sum_le_X: l+m must be at least 2");
  const BigInt kk(k), s = BigInt(k) + lm - 2;
  const BigInt d = kk * kk - 12 * kk + 4;
  const BigInt L = 2 * kk * (kk - 2) - s * (kk + 2);
  return L >= 0 && L * L >= s * s * d;
}

/// Exact test of l+m >= Y(k):  s sqrt(d) <= L' with L' = s(k+2) - 2k(k-2);
/// holds iff L' >= 0 and L'^2 >= s^2 d.  Requires k >= 12 and l+m >= 2.
inline bool sum_ge_Y(long long k, long long lm) {
  detail::require_threshold_k(k, "sum_ge_Y");
  if (lm < 2) throw std::domain_error("sum_ge_Y: l+m must be at least 2");
  const BigInt kk(k), s = BigInt(k) + lm - 2;
  const BigInt d = kk * kk - 12 * kk + 4;
  const BigInt L = s * (kk + 2) - 2 * kk * (kk - 2);
  return L >= 0 && L * L >= s * s * d;
}

/// Instantiates the so(k+l+m) family: a_i = k_i/(2(k+l+m-2)) for the inputs
/// sorted descending.  Requires k, l, m >= 1 and l+m > 2 after sorting
/// (l = m = 1 would put the largest parameter at the excluded value 1/2).
inline GwsParams so_family_params(long long k, long long l, long long m) {
  std::array<long long, 3> t = {k, l, m};
  std::sort(t.begin(), t.end(), std::greater<>());
  if (t[2] < 1) throw std::domain_error("so family: k, l, m must be positive integers");
  if (t[1] + t[2] <= 2)
    throw std::domain_error("so family: l+m must exceed 2 (l = m = 1 hits the boundary a = 1/2)");
  const BigInt two_s = 2 * (BigInt(t[0]) + t[1] + t[2] - 2);
  return GwsParams::from_rationals(Rational(BigInt(t[0]), two_s), Rational(BigInt(t[1]), two_s),
                                   Rational(BigInt(t[2]), two_s));
}

/// Verdict for the so(k+l+m) family via the X/Y thresholds: after sorting
/// descending, the class is AllPreserved iff k <= 11 or l+m <= X(k) or
/// l+m >= Y(k) (exact integer comparisons; both threshold tests are
/// unreachable for k >= 17, which yields SomePreserved there).  SomeLose
/// cannot occur: theta = 1/(k+l+m-2) > 0.  The witness fields are filled
/// from the generic predicates on the instantiated parameters and refer to
/// the sorted triple; the two routes agree on every admissible triple.
inline Verdict so_family_classify(long long k, long long l, long long m) {
  std::array<long long, 3> t = {k, l, m};
  std::sort(t.begin(), t.end(), std::greater<>());
  Verdict v = verdict(so_family_params(t[0], t[1], t[2]));
  const bool preserved =
      t[0] <= 11 || sum_le_X(t[0], t[1] + t[2]) || sum_ge_Y(t[0], t[1] + t[2]);
  assert(preserved == (v.outcome == Outcome::AllPreserved));
  v.outcome = preserved ? Outcome::AllPreserved : Outcome::SomePreserved;
  return v;
}

/// One preserved triple of the so family with k >= 12, tagged by the
/// threshold side that admits it.
struct SoTriple {
  long long k, l, m;  ///< sorted: k >= l >= m >= 1
  bool x_side;        ///< true: l+m <= X(k); false: l+m >= Y(k)
  friend bool operator==(const SoTriple& a, const SoTriple& b) {
    return a.k == b.k && a.l == b.l && a.m == b.m && a.x_side == b.x_side;
  }
};

/// All AllPreserved triples of the so family with 12 <= k <= k_max, by the
/// exact threshold predicates.  Both predicates are monotone in l+m, so each
/// side reduces to a sum range: l+m in [3, floor(X(k))] and
/// [ceil(Y(k)), 2k] (the latter located by binary search).  The list is
/// ordered by k, X-side before Y-side, then by l+m and l; it is nonempty
/// only for k <= 16 — from k = 17 on, X(k) < 3 and Y(k) > 2k, so both
/// ranges are empty.  Requires k_max >= 12.
inline std::vector<SoTriple> enumerate_preserving_triples(long long k_max) {
  if (k_max < 12) throw std::domain_error("enumerate_preserving_triples: k_max must be >= 12");
  std::vector<SoTriple> out;
  const auto push_sum = [&out](long long k, long long sum, bool x_side) {
    for (long long l = (sum + 1) / 2; l <= std::min(k, sum - 1); ++l)
      out.push_back({k, l, sum - l, x_side});
  };
  for (long long k = 12; k <= k_max; ++k) {
    long long x_hi = 2;  // X(k) > 2 always; X(k) <= X(12) = 5 keeps this loop short
    while (sum_le_X(k, x_hi + 1)) ++x_hi;
    for (long long sum = 3; sum <= x_hi; ++sum) push_sum(k, sum, true);
    if (sum_ge_Y(k, 2 * k)) {
      long long lo = 3, hi = 2 * k;  // smallest admissible sum with sum >= Y(k)
      while (lo < hi) {
        const long long mid = lo + (hi - lo) / 2;
        if (sum_ge_Y(k, mid)) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      for (long long sum = lo; sum <= 2 * k; ++sum) push_sum(k, sum, false);
    }
  }
  return out;
}

}  // namespace gws
