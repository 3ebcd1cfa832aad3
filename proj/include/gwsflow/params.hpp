#pragma once

// Parameter triple (a1, a2, a3) of a generalized Wallach space.
//
// A space in this family is determined by three reals 0 < ai < 1/2.  All
// classification decisions are driven by two derived quantities per index:
//
//   * the singular roots mi < Mi of  t^2 - t/ai + 1  (mi*Mi = 1), and
//   * the cap  theta_i = ai - 1/2 + sqrt((1-2ai)/(1+2ai))/2,
//
// together with theta = a1+a2+a3 - 1/2.  The class carries the triple both
// as exact rationals and as binary64.  When constructed from rationals the
// order predicates (theta vs. 1/2, theta vs. theta_i, position of t in the
// chain a < m < 2a < 1 < 1/(2a) < M < 1/a) are decided exactly: each reduces
// to the sign of a rational expression, no radical is ever evaluated.  When
// constructed from doubles the comparisons fall back to binary64 with a tie
// guard band, and the instance is flagged inexact.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gwsflow/rational.hpp"

namespace gws {

/// Guard band for order predicates on inexact (binary64-constructed) params:
/// differences smaller than this are reported as ties.
inline constexpr double kInexactTieBand = 1e-12;

class GwsParams {
 public:
  /// Exact construction.  Validates 0 < ai < 1/2 for each i.
  static GwsParams from_rationals(Rational a1, Rational a2, Rational a3) {
    return GwsParams({std::move(a1), std::move(a2), std::move(a3)}, /*exact=*/true);
  }

  /// Binary64 construction for irrational parameters.  The values are kept
  /// exactly (every finite double is rational) but the instance is flagged
  /// inexact so order predicates apply the tie guard band.
  static GwsParams from_doubles(double a1, double a2, double a3) {
    return GwsParams({rational_from_double(a1), rational_from_double(a2), rational_from_double(a3)},
                     /*exact=*/false);
  }

  /// Parses "p/q" / decimal tokens; exact.
  static GwsParams from_strings(const std::string& a1, const std::string& a2, const std::string& a3) {
    return from_rationals(rational_from_string(a1), rational_from_string(a2), rational_from_string(a3));
  }

  /// ai as an exact rational; i in {0, 1, 2}.
  const Rational& a(int i) const { return a_[check_index(i)]; }
  /// ai as binary64.
  double a_d(int i) const { return ad_[check_index(i)]; }
  std::array<double, 3> a_d() const { return ad_; }

  /// True when constructed from rationals (order predicates are exact).
  bool exact() const { return exact_; }

  /// theta = a1 + a2 + a3 - 1/2 (exact).
  const Rational& theta() const { return theta_; }
  double theta_d() const { return theta_d_; }

  /// Sign of theta, i.e. of (a1+a2+a3) - 1/2.  Exact for exact params;
  /// otherwise binary64 with the tie band mapping near-zero to 0.
  int theta_sign() const {
    if (exact_) return sgn(theta_);
    return std::fabs(theta_d_) <= kInexactTieBand ? 0 : (theta_d_ > 0 ? 1 : -1);
  }

  /// omega = (1/a1 + 1/a2 + 1/a3)^{-1}, the volume-normalization exponent
  /// (rational for rational ai).
  const Rational& omega() const { return omega_; }
  double omega_d() const { return omega_d_; }

  /// Smaller root mi of t^2 - t/ai + 1 = 0; lies in (ai, 2ai).
  double m(int i) const { return m_[check_index(i)]; }
  /// Larger root Mi = 1/mi; lies in (1/(2ai), 1/ai).
  double M(int i) const { return M_[check_index(i)]; }

  /// Value of t^2 - t/ai + 1 at rational t, exactly.  Negative exactly on
  /// (mi, Mi), so this decides membership in the singular gap without
  /// evaluating the radical.
  Rational singular_quadratic(int i, const Rational& t) const {
    return t * t - t / a_[check_index(i)] + 1;
  }

  /// theta_i = ai - 1/2 + sqrt((1-2ai)/(1+2ai))/2, evaluated in binary64
  /// with a cancellation-free formula.
  double theta_cap(int i) const { return cap_[check_index(i)]; }

  /// Sign of theta - theta_i.  For exact params this is decided exactly via
  ///   theta >= theta_i  <=>  4(aj+ak)^2 (1+2ai) >= (1-2ai),
  /// with equality on both sides simultaneously (the radical never appears).
  /// For inexact params: binary64 difference with the tie band mapped to 0.
  int theta_vs_cap(int i) const {
    check_index(i);
    if (exact_) {
      const Rational& ai = a_[i];
      Rational s = a_[0] + a_[1] + a_[2] - ai;  // aj + ak
      return sgn(4 * s * s * (1 + 2 * ai) - (1 - 2 * ai));
    }
    double d = theta_d_ - cap_[i];
    return std::fabs(d) <= kInexactTieBand ? 0 : (d > 0 ? 1 : -1);
  }

  bool operator==(const GwsParams& o) const { return a_ == o.a_ && exact_ == o.exact_; }

 private:
  GwsParams(std::array<Rational, 3> a, bool exact) : a_(std::move(a)), exact_(exact) {
    for (int i = 0; i < 3; ++i) {
      if (!(a_[i] > 0 && 2 * a_[i] < 1))
        throw std::domain_error("parameter a" + std::to_string(i + 1) + " = " + to_string(a_[i]) +
                                " outside (0, 1/2): the factor (1 - 2a" + std::to_string(i + 1) +
                                ") must stay positive");
      ad_[i] = to_double(a_[i]);
    }
    theta_ = a_[0] + a_[1] + a_[2] - Rational(1, 2);
    theta_d_ = to_double(theta_);
    omega_ = (a_[0] * a_[1] * a_[2]) / (a_[1] * a_[2] + a_[0] * a_[2] + a_[0] * a_[1]);
    omega_d_ = to_double(omega_);
    for (int i = 0; i < 3; ++i) {
      double ai = ad_[i];
      double u = std::sqrt((1 - 2 * ai) * (1 + 2 * ai));  // sqrt(1 - 4ai^2)
      m_[i] = 2 * ai / (1 + u);                            // (1-u)/(2a) without cancellation
      M_[i] = (1 + u) / (2 * ai);
      cap_[i] = 2 * ai * ai * u / ((1 + u) * (1 + 2 * ai));  // u(1-u)/(2(1+2a)), stable
    }
  }

  static int check_index(int i) {
    if (i < 0 || i > 2) throw std::out_of_range("index must be 0, 1, or 2");
    return i;
  }

  std::array<Rational, 3> a_;
  std::array<double, 3> ad_{};
  bool exact_;
  Rational theta_, omega_;
  double theta_d_ = 0, omega_d_ = 0;
  std::array<double, 3> m_{}, M_{}, cap_{};
};

/// Cyclic successor pair of an index: perm(0) = (1,2), perm(1) = (2,0),
/// perm(2) = (0,1).  Every per-index formula in the library is written once
/// for (i, j, k) and instantiated through this map.
struct IndexPair {
  int j, k;
};
inline IndexPair cyclic_partners(int i) {
  switch (i) {
    case 0: return {1, 2};
    case 1: return {2, 0};
    case 2: return {0, 1};
    default: throw std::out_of_range("index must be 0, 1, or 2");
  }
}

}  // namespace gws
