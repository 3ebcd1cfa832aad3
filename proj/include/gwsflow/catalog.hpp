#pragma once

// The fifteen families of generalized Wallach spaces with simple G, as a
// declarative catalog.  Each entry records the Lie-algebra labels of (g, h),
// the exact rational formulas for (a1, a2, a3) and for the theta column, and
// the admissible parameter ranges.  Families 1-3 carry three free integers
// (k, l, m), families 4-5 a single integer l, families 6-15 are isolated
// spaces.  The label of family 11's isotropy algebra is stored with the
// spelling quirk of the source table ("s0(8)" with a digit zero) next to its
// normalized form.
//
// Classification across the catalog: families 2, 3, 5, 7 and 15 have
// theta <= 0 for every admissible parameter choice, so positive Ricci
// curvature is lost there (SomeLose); families 4, 6, 8, 9, 10, 11, 12, 13
// and 14 have theta >= 1/6, which exceeds the largest possible cap
// theta* ~ 0.0674, so the positivity region is invariant (AllPreserved).
// Family 1's verdict genuinely depends on (k, l, m) — that is
// so_family_classify's job (classify.hpp).

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwsflow/classify.hpp"
#include "gwsflow/params.hpp"
#include "gwsflow/rational.hpp"

namespace gws {

inline constexpr int kFamilyCount = 15;

/// Which free parameters a family takes.
enum class FamilyParams {
  KLM,   ///< three integers (k, l, m)
  L,     ///< a single integer l
  None,  ///< an isolated space
};

/// One row of the catalog.  The a_formula / theta_formula strings are the
/// rendered view (exact "p/q" literals for the isolated families, symbolic
/// in k, l, m otherwise); a_num/a_den and theta_num/theta_den carry the
/// machine-readable constants where the column is constant (denominator 0
/// means "depends on the parameters").
struct FamilySpec {
  int id;
  FamilyParams params;
  const char* g;         ///< Lie algebra of G
  const char* h;         ///< isotropy algebra, verbatim table spelling
  const char* h_alias;   ///< normalized spelling when it differs, else ""
  const char* constraint;  ///< admissible parameters, "" if only positivity
  std::array<const char*, 3> a_formula;
  const char* theta_formula;
  std::array<int, 3> a_num, a_den;  ///< fixed (a1,a2,a3); zeros when parameterized
  int theta_num, theta_den;         ///< constant theta column; den 0 when parameterized
};

inline const std::array<FamilySpec, kFamilyCount>& family_table() {
  static const std::array<FamilySpec, kFamilyCount> table = {{
      {1, FamilyParams::KLM, "so(k+l+m)", "so(k)+so(l)+so(m)", "",
       "k, l, m >= 1 and every pair sums to more than 2",
       {"k/(2(k+l+m-2))", "l/(2(k+l+m-2))", "m/(2(k+l+m-2))"}, "1/(k+l+m-2)",
       {0, 0, 0}, {0, 0, 0}, 0, 0},
      {2, FamilyParams::KLM, "su(k+l+m)", "su(k)+su(l)+su(m)", "", "k, l, m >= 1",
       {"k/(2(k+l+m))", "l/(2(k+l+m))", "m/(2(k+l+m))"}, "0",
       {0, 0, 0}, {0, 0, 0}, 0, 1},
      {3, FamilyParams::KLM, "sp(k+l+m)", "sp(k)+sp(l)+sp(m)", "", "k, l, m >= 1",
       {"k/(2(k+l+m+1))", "l/(2(k+l+m+1))", "m/(2(k+l+m+1))"}, "-1/(2(k+l+m+1))",
       {0, 0, 0}, {0, 0, 0}, 0, 0},
      {4, FamilyParams::L, "su(2l)", "u(l)", "", "l >= 2",
       {"(l+1)/(4l)", "(l-1)/(4l)", "1/4"}, "1/4",
       {0, 0, 0}, {0, 0, 0}, 1, 4},
      {5, FamilyParams::L, "so(2l)", "u(1)+u(l-1)", "", "l >= 4",
       {"(l-2)/(4(l-1))", "(l-2)/(4(l-1))", "1/(2(l-1))"}, "0",
       {0, 0, 0}, {0, 0, 0}, 0, 1},
      {6, FamilyParams::None, "e6", "su(4)+2sp(1)+R", "", "",
       {"1/4", "1/4", "1/6"}, "1/6", {1, 1, 1}, {4, 4, 6}, 1, 6},
      {7, FamilyParams::None, "e6", "so(8)+R^2", "", "",
       {"1/6", "1/6", "1/6"}, "0", {1, 1, 1}, {6, 6, 6}, 0, 1},
      {8, FamilyParams::None, "e6", "sp(3)+sp(1)", "", "",
       {"1/4", "1/8", "7/24"}, "1/6", {1, 1, 7}, {4, 8, 24}, 1, 6},
      {9, FamilyParams::None, "e7", "so(8)+3sp(1)", "", "",
       {"2/9", "2/9", "2/9"}, "1/6", {2, 2, 2}, {9, 9, 9}, 1, 6},
      {10, FamilyParams::None, "e7", "su(6)+sp(1)+R", "", "",
       {"2/9", "1/6", "5/18"}, "1/6", {2, 1, 5}, {9, 6, 18}, 1, 6},
      {11, FamilyParams::None, "e7", "s0(8)", "so(8)", "",
       {"5/18", "5/18", "5/18"}, "1/3", {5, 5, 5}, {18, 18, 18}, 1, 3},
      {12, FamilyParams::None, "e8", "so(12)+2sp(1)", "", "",
       {"1/5", "1/5", "4/15"}, "1/6", {1, 1, 4}, {5, 5, 15}, 1, 6},
      {13, FamilyParams::None, "e8", "so(8)+so(8)", "", "",
       {"4/15", "4/15", "4/15"}, "3/10", {4, 4, 4}, {15, 15, 15}, 3, 10},
      {14, FamilyParams::None, "f4", "so(5)+2sp(1)", "", "",
       {"5/18", "5/18", "1/9"}, "1/6", {5, 5, 1}, {18, 18, 9}, 1, 6},
      {15, FamilyParams::None, "f4", "so(8)", "", "",
       {"1/9", "1/9", "1/9"}, "-1/6", {1, 1, 1}, {9, 9, 9}, -1, 6},
  }};
  return table;
}

/// Catalog row for a family id in 1..15.
inline const FamilySpec& family(int id) {
  if (id < 1 || id > kFamilyCount)
    throw std::out_of_range("family id must lie in 1.." + std::to_string(kFamilyCount));
  return family_table()[static_cast<std::size_t>(id - 1)];
}

/// Normalized isotropy label (the verbatim spelling unless an alias exists).
inline std::string normalized_h(const FamilySpec& f) {
  return f.h_alias[0] != '\0' ? f.h_alias : f.h;
}

/// Families 1-3: a_i = k_i / (2(k+l+m+c)) with c = -2, 0, +1 respectively.
inline GwsParams instantiate(int id, long long k, long long l, long long m) {
  if (id < 1 || id > 3)
    throw std::invalid_argument("family " + std::to_string(id) + " does not take (k, l, m)");
  if (k < 1 || l < 1 || m < 1)
    throw std::domain_error("family " + std::to_string(id) + ": k, l, m must be positive integers");
  if (id == 1 && (l + m <= 2 || k + m <= 2 || k + l <= 2))
    throw std::domain_error(
        "family 1: every pair of k, l, m must sum to more than 2 "
        "(otherwise one parameter reaches the boundary value 1/2)");
  const long long shift = (id == 1) ? -2 : (id == 2) ? 0 : 1;
  const BigInt den = 2 * (BigInt(k) + l + m + shift);
  return GwsParams::from_rationals(Rational(BigInt(k), den), Rational(BigInt(l), den),
                                   Rational(BigInt(m), den));
}

/// Families 4 and 5, with their single integer parameter.
inline GwsParams instantiate(int id, long long l) {
  if (id == 4) {
    if (l < 2) throw std::domain_error("family 4 requires l >= 2");
    return GwsParams::from_rationals(Rational(l + 1, 4 * l), Rational(l - 1, 4 * l),
                                     Rational(1, 4));
  }
  if (id == 5) {
    if (l < 4) throw std::domain_error("family 5 requires l >= 4");
    return GwsParams::from_rationals(Rational(l - 2, 4 * (l - 1)), Rational(l - 2, 4 * (l - 1)),
                                     Rational(1, 2 * (l - 1)));
  }
  throw std::invalid_argument("family " + std::to_string(id) + " does not take a single l");
}

/// Families 6-15 (no free parameters), straight from the catalog row.
inline GwsParams instantiate(int id) {
  const FamilySpec& f = family(id);
  if (f.params != FamilyParams::None)
    throw std::invalid_argument("family " + std::to_string(id) + " requires parameters");
  return GwsParams::from_rationals(Rational(f.a_num[0], f.a_den[0]),
                                   Rational(f.a_num[1], f.a_den[1]),
                                   Rational(f.a_num[2], f.a_den[2]));
}

/// Generic entry point: dispatches on the family's parameter kind.  args
/// must hold exactly (k, l, m), (l), or nothing.
inline GwsParams instantiate(int id, const std::vector<long long>& args) {
  switch (family(id).params) {
    case FamilyParams::KLM:
      if (args.size() != 3)
        throw std::invalid_argument("family " + std::to_string(id) + " takes (k, l, m)");
      return instantiate(id, args[0], args[1], args[2]);
    case FamilyParams::L:
      if (args.size() != 1)
        throw std::invalid_argument("family " + std::to_string(id) + " takes a single l");
      return instantiate(id, args[0]);
    case FamilyParams::None:
      if (!args.empty())
        throw std::invalid_argument("family " + std::to_string(id) + " takes no parameters");
      return instantiate(id);
  }
  throw std::logic_error("unreachable");
}

/// The theta column of the catalog, evaluated independently of the
/// a-formulas (same admissibility rules as instantiate).  The identity
/// instantiate(id, args).theta() == family_theta(id, args) is a cross-check
/// on both representations.
inline Rational family_theta(int id, const std::vector<long long>& args = {}) {
  const FamilySpec& f = family(id);
  const auto expect_args = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("family " + std::to_string(id) + ": expected " +
                                  std::to_string(n) + " parameter(s)");
  };
  switch (f.params) {
    case FamilyParams::KLM: {
      expect_args(3);
      const long long k = args[0], l = args[1], m = args[2];
      if (k < 1 || l < 1 || m < 1)
        throw std::domain_error("family " + std::to_string(id) +
                                ": k, l, m must be positive integers");
      if (id == 1) {
        if (l + m <= 2 || k + m <= 2 || k + l <= 2)
          throw std::domain_error("family 1: every pair of k, l, m must sum to more than 2");
        return Rational(BigInt(1), BigInt(k) + l + m - 2);
      }
      if (id == 3) return Rational(BigInt(-1), 2 * (BigInt(k) + l + m + 1));
      break;  // family 2: constant 0
    }
    case FamilyParams::L:
      expect_args(1);
      if (id == 4 && args[0] < 2) throw std::domain_error("family 4 requires l >= 2");
      if (id == 5 && args[0] < 4) throw std::domain_error("family 5 requires l >= 4");
      break;
    case FamilyParams::None:
      expect_args(0);
      break;
  }
  return Rational(f.theta_num, f.theta_den);
}

/// Outcome per family over sampled parameter grids: families 2 and 3 over
/// 1 <= m <= l <= k <= bound, family 4 over 2 <= l <= bound, family 5 over
/// 4 <= l <= bound, families 6-15 as-is.  Every family's outcome is uniform
/// across its grid (a violation would throw); family 1 is omitted because
/// its outcome genuinely varies — use so_family_classify.  The expected
/// partition is SomeLose = {2,3,5,7,15}, AllPreserved = {4,6,8,...,14}.
inline std::map<int, Outcome> corollary_table(long long bound = 20) {
  if (bound < 4) throw std::domain_error("corollary_table: bound must be >= 4");
  std::map<int, Outcome> out;
  const auto merge = [&out](int id, Outcome o) {
    const auto [it, fresh] = out.emplace(id, o);
    if (!fresh && it->second != o)
      throw std::logic_error("family " + std::to_string(id) +
                             ": outcome varies over the sampled grid");
  };
  for (int id : {2, 3})
    for (long long k = 1; k <= bound; ++k)
      for (long long l = 1; l <= k; ++l)
        for (long long m = 1; m <= l; ++m) merge(id, verdict(instantiate(id, k, l, m)).outcome);
  for (long long l = 2; l <= bound; ++l) merge(4, verdict(instantiate(4, l)).outcome);
  for (long long l = 4; l <= bound; ++l) merge(5, verdict(instantiate(5, l)).outcome);
  for (int id = 6; id <= kFamilyCount; ++id) merge(id, verdict(instantiate(id)).outcome);
  return out;
}

}  // namespace gws
