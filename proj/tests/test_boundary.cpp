#include "gwsflow/boundary.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gwsflow/flow.hpp"
#include "gwsflow/geometry.hpp"
#include "test_util.hpp"

using gws::Branch;
using gws::GwsParams;
using gws::MetricPoint;

namespace {

// Example spaces used as fixtures throughout: the (5,4,3), (14,7,4) and
// (15,14,13) instances of the first classical family a_i = n_i/(2(sum-2)).
GwsParams space543() { return GwsParams::from_rationals({5, 26}, {2, 13}, {3, 26}); }
GwsParams space14_7_4() { return GwsParams::from_rationals({7, 23}, {7, 46}, {2, 23}); }

// A random parameter value on a valid branch, clear of the singular gap.
double random_branch_t(gwstest::Rng& rng, const GwsParams& p, int i, Branch b) {
  if (b == Branch::Low) return p.m(i) * rng.uniform(1e-4, 0.999);
  return p.M(i) * rng.log_uniform(1.001, 1e3);
}

TEST(PhiPsi, EqualParametersDegenerate) {
  auto pp = gws::phi_psi(0.25, 0.25);
  EXPECT_NEAR(pp.phi, 0.25, 1e-15);
  EXPECT_NEAR(pp.psi, 0.25, 1e-15);
  auto qq = gws::phi_psi(1.0 / 6.0, 1.0 / 6.0);
  EXPECT_NEAR(qq.phi, 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(qq.psi, 1.0 / 6.0, 1e-14);
}

TEST(PhiPsi, ClosedFormsForSpace543) {
  // Phi(a1,a3) = (9 sqrt(10) - 27)/13, Psi(a1,a3) = (50 - 15 sqrt(10))/13
  // for a1 = 5/26, a3 = 3/26.
  auto p = space543();
  auto pp = gws::phi_psi(p, 0, 2);
  EXPECT_NEAR(pp.phi, (9 * std::sqrt(10.0) - 27) / 13, 1e-13);
  EXPECT_NEAR(pp.psi, (50 - 15 * std::sqrt(10.0)) / 13, 1e-13);
  EXPECT_NEAR(pp.phi, 0.1123, 1e-3);
  EXPECT_NEAR(pp.psi, 0.1974, 1e-3);
}

TEST(PhiPsi, OrderingForDistinctParameters) {
  // For a_j < a_i: Phi(a_i,a_j) < a_j and Psi(a_i,a_j) > a_i.
  gwstest::Rng rng(301);
  int seen = 0;
  while (seen < 1000) {
    auto ai = gwstest::random_param(rng), aj = gwstest::random_param(rng);
    if (!(aj < ai)) continue;
    ++seen;
    auto pp = gws::phi_psi(gws::to_double(ai), gws::to_double(aj));
    ASSERT_LT(pp.phi / gws::to_double(aj), 1.0);
    ASSERT_GT(pp.psi / gws::to_double(ai), 1.0);
  }
}

TEST(PhiPsi, RejectsOutOfRange) {
  EXPECT_THROW(gws::phi_psi(0.5, 0.25), std::domain_error);
  EXPECT_THROW(gws::phi_psi(0.25, 0.0), std::domain_error);
}

TEST(CurvePoint, DefiningEquationsOnRandomInputs) {
  // lambda_i = 0, Vol = 1, and x_j = t x_k at 10^3 random (p, branch, t).
  gwstest::Rng rng(302);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = gwstest::random_params(rng);
    int i = static_cast<int>(rng.integer(0, 2));
    Branch b = rng.uniform01() < 0.5 ? Branch::Low : Branch::High;
    double t = random_branch_t(rng, p, i, b);
    auto x = gws::curve_point(p, i, t);
    auto [j, k] = gws::cyclic_partners(i);
    double scale = p.a_d(i) * (x[i] * x[i] + x[j] * x[j] + x[k] * x[k]) + x[j] * x[k];
    ASSERT_LE(std::fabs(gws::lambda(p, x, i)), 1e-10 * scale) << "t=" << t;
    ASSERT_NEAR(gws::log_volume(p, x), 0.0, 1e-9);
    ASSERT_NEAR(x[j] / x[k], t, 1e-12 * t);
  }
}

TEST(CurvePoint, FrozenExampleDecimals) {
  // Space (5,4,3): the high-branch point at t = 5.2 recomputed from the
  // parametrization must satisfy the defining equations; the named point at
  // t2 is checked in the verification suite once t2 is derived.  Here: the
  // corner marker t13 reproduces the printed decimals.
  auto p = space543();
  auto mk = gws::t_markers(p, 0);
  EXPECT_NEAR(mk.t_high, 13.0 / (50 - 15 * std::sqrt(10.0)), 1e-12);
  EXPECT_NEAR(mk.t_high, 5.0666, 1e-3);
}

TEST(CurvePoint, SingularGapRejected) {
  auto p = space543();  // gap [0.2, 5] at index 0
  EXPECT_THROW(gws::curve_point(p, 0, 0.2), std::domain_error);
  EXPECT_THROW(gws::curve_point(p, 0, 1.0), std::domain_error);
  EXPECT_THROW(gws::curve_point(p, 0, 5.0), std::domain_error);
  EXPECT_THROW(gws::curve_point(p, 0, -0.1), std::domain_error);
  EXPECT_THROW(gws::curve_point(p, 0, 0.0), std::domain_error);
  try {
    gws::curve_point(p, 0, 3.0);
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("singular gap"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(gws::curve_point(p, 0, 0.19));
  EXPECT_NO_THROW(gws::curve_point(p, 0, 5.1));
}

TEST(CurvePoint, VanishesTowardSingularEndpoint) {
  // x_i(t) -> 0 as t -> m_i^-.  The decay rate is governed by the exponent
  // omega(1/a_j + 1/a_k)/2 and varies by space and index, so the universal
  // checks are strict decrease and a large drop across offset decades; the
  // absolute 1e-3 bound is asserted at offset 1e-12 for the fastest-decaying
  // index of the fixtures.
  for (auto p : {space543(), space14_7_4()}) {
    for (int i = 0; i < 3; ++i) {
      double first = 0, prev = std::numeric_limits<double>::infinity();
      for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
        auto x = gws::curve_point(p, i, p.m(i) * (1 - eps));
        ASSERT_GT(x[i], 0.0);
        ASSERT_TRUE(std::isfinite(x[i]));
        ASSERT_LT(x[i], prev);
        prev = x[i];
        if (eps == 1e-3) first = x[i];
      }
      EXPECT_LT(prev, 0.05 * first);
    }
    EXPECT_LT(gws::curve_point(p, 0, p.m(0) * (1 - 1e-12)).x1, 1e-3);
  }
}

TEST(IntersectionPoint, DefiningEquationsOnRandomInputs) {
  gwstest::Rng rng(303);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = gwstest::random_params(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        auto P = gws::intersection_point(p, i, j);
        double scale = 1 + P.point.x1 * P.point.x1 + P.point.x2 * P.point.x2 + P.point.x3 * P.point.x3;
        ASSERT_LE(std::fabs(gws::lambda(p, P.point, i)), 1e-9 * scale);
        ASSERT_LE(std::fabs(gws::lambda(p, P.point, j)), 1e-9 * scale);
        ASSERT_NEAR(gws::log_volume(p, P.point), 0.0, 1e-9);
      }
  }
}

TEST(IntersectionPoint, SymmetricInThePair) {
  gwstest::Rng rng(304);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = gwstest::random_params(rng);
    auto A = gws::intersection_point(p, 0, 2).point;
    auto B = gws::intersection_point(p, 2, 0).point;
    for (int c = 0; c < 3; ++c) ASSERT_NEAR(A[c], B[c], 1e-12 * A[c]);
  }
}

TEST(IntersectionPoint, Space543CornerDecimals) {
  // P13 = (gamma q0, q0, delta q0) with q0 = gamma^(-12/47) delta^(-20/47):
  // (0.3916, 3.4857, 0.6880); its parameter on r1 is t13 = 1/delta.
  auto p = space543();
  auto P = gws::intersection_point(p, 0, 2);
  EXPECT_NEAR(P.point.x1, 0.3916, 1e-3);
  EXPECT_NEAR(P.point.x2, 3.4857, 1e-3);
  EXPECT_NEAR(P.point.x3, 0.6880, 1e-3);
  EXPECT_NEAR(P.t_on_curve, 5.0666, 1e-3);
  // The principal Ricci curvature r1 vanishes there (the point is on the
  // lambda_1 = 0 cone).
  EXPECT_LE(std::fabs(gws::principal_ricci(p, P.point)[0]), 1e-3);

  double gamma = (9 * std::sqrt(10.0) - 27) / 13;
  double delta = (50 - 15 * std::sqrt(10.0)) / 13;
  double q0 = std::pow(gamma, -12.0 / 47.0) * std::pow(delta, -20.0 / 47.0);
  EXPECT_NEAR(P.point.x2, q0, 1e-9 * q0);
  EXPECT_NEAR(P.point.x1, gamma * q0, 1e-9);
  EXPECT_NEAR(P.point.x3, delta * q0, 1e-9);
}

TEST(IntersectionPoint, EqualParametersSymmetry) {
  // (a,a,a): Phi = Psi = a, so P12 has x1 = x2 = a p0.
  auto p = GwsParams::from_rationals({1, 5}, {1, 5}, {1, 5});
  auto P = gws::intersection_point(p, 0, 1);
  EXPECT_NEAR(P.point.x1, P.point.x2, 1e-13 * P.point.x1);
  EXPECT_NEAR(P.point.x1 / P.point.x3, 0.2, 1e-13);
  EXPECT_THROW(gws::intersection_point(p, 1, 1), std::invalid_argument);
}

TEST(TMarkers, BoundsOnRandomTriples) {
  // Branch membership t_ij < m_i and t_ik > M_i on 10^4 random triples.
  // The sharper bounds against a_i and 1/a_i hold exactly when a_i is the
  // (weakly) larger parameter of the pair — Psi is not symmetric, so the
  // direction flips with the order of the pair.  Equality appears only for
  // equal parameter pairs.
  gwstest::Rng rng(305);
  for (int trial = 0; trial < 10000; ++trial) {
    auto p = gwstest::random_params(rng);
    for (int i = 0; i < 3; ++i) {
      auto [j, k] = gws::cyclic_partners(i);
      auto mk = gws::t_markers(p, i);
      ASSERT_LT(mk.t_low, p.m(i));
      ASSERT_GT(mk.t_high, p.M(i));
      if (p.a(i) == p.a(j)) {
        ASSERT_NEAR(mk.t_low, p.a_d(i), 1e-14);
      } else if (p.a(i) > p.a(j)) {
        ASSERT_LT(p.a_d(i), mk.t_low);
      } else {
        ASSERT_GT(p.a_d(i), mk.t_low);
      }
      if (p.a(i) == p.a(k)) {
        ASSERT_NEAR(mk.t_high, 1 / p.a_d(i), 1e-13 / p.a_d(i));
      } else if (p.a(i) > p.a(k)) {
        ASSERT_LT(mk.t_high, 1 / p.a_d(i));
      } else {
        ASSERT_GT(mk.t_high, 1 / p.a_d(i));
      }
    }
  }
}

TEST(TMarkers, EqualParameterTripleEndpoints) {
  auto p = GwsParams::from_rationals({1, 4}, {1, 4}, {1, 4});
  for (int i = 0; i < 3; ++i) {
    auto mk = gws::t_markers(p, i);
    EXPECT_NEAR(mk.t_low, 0.25, 1e-15);
    EXPECT_NEAR(mk.t_high, 4.0, 1e-14);
  }
}

TEST(TMarkers, MarkerPointsAreCorners) {
  // curve_point at a marker is the corresponding pairwise corner: the
  // partner lambda vanishes there as well, and the coordinates agree with
  // intersection_point.
  gwstest::Rng rng(306);
  for (int trial = 0; trial < 500; ++trial) {
    auto p = gwstest::random_params(rng);
    for (int i = 0; i < 3; ++i) {
      auto [j, k] = gws::cyclic_partners(i);
      auto mk = gws::t_markers(p, i);
      auto low = gws::curve_point(p, i, mk.t_low);
      auto high = gws::curve_point(p, i, mk.t_high);
      double ls = 1 + low.x1 * low.x1 + low.x2 * low.x2 + low.x3 * low.x3;
      double hs = 1 + high.x1 * high.x1 + high.x2 * high.x2 + high.x3 * high.x3;
      ASSERT_LE(std::fabs(gws::lambda(p, low, j)), 1e-9 * ls);
      ASSERT_LE(std::fabs(gws::lambda(p, high, k)), 1e-9 * hs);
      auto Pij = gws::intersection_point(p, i, j);
      auto Pik = gws::intersection_point(p, i, k);
      ASSERT_DOUBLE_EQ(Pij.t_on_curve, mk.t_low);
      ASSERT_DOUBLE_EQ(Pik.t_on_curve, mk.t_high);
      for (int c = 0; c < 3; ++c) {
        ASSERT_NEAR(low[c], Pij.point[c], 1e-9 * (1 + Pij.point[c]));
        ASSERT_NEAR(high[c], Pik.point[c], 1e-9 * (1 + Pik.point[c]));
      }
    }
  }
}

TEST(TMarkers, Space14_7_4ClosedForms) {
  // t12 = 320/161 - 8 sqrt(1110)/161 and t13 = 230/(7(57 - sqrt(2109))).
  auto p = space14_7_4();
  auto mk = gws::t_markers(p, 0);
  EXPECT_NEAR(mk.t_low, 320.0 / 161 - 8 * std::sqrt(1110.0) / 161, 1e-12);
  EXPECT_NEAR(mk.t_high, 230.0 / (7 * (57 - std::sqrt(2109.0))), 1e-12);
  EXPECT_NEAR(mk.t_low, 0.3321, 1e-3);
  EXPECT_NEAR(mk.t_high, 2.9665, 1e-3);
}

TEST(ICurve, PointAndVolume) {
  gwstest::Rng rng(307);
  auto p = space543();
  EXPECT_EQ(gws::i_curve(p, 2, 1.0), (MetricPoint{1, 1, 1}));
  for (int trial = 0; trial < 1000; ++trial) {
    double tau = rng.log_uniform(0.1, 10);
    int k = static_cast<int>(rng.integer(0, 2));
    auto x = gws::i_curve(p, k, tau);
    auto [i, j] = gws::cyclic_partners(k);
    ASSERT_EQ(x[i], tau);
    ASSERT_EQ(x[j], tau);
    ASSERT_NEAR(gws::log_volume(p, x), 0.0, 1e-11);
  }
  EXPECT_THROW(gws::i_curve(p, 0, 0.0), std::domain_error);
}

TEST(ICurve, CrossingLandsOnBoundaryCurve) {
  gwstest::Rng rng(308);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = gwstest::random_params(rng);
    for (int k = 0; k < 3; ++k) {
      auto [pi, pj] = gws::cyclic_partners(k);
      for (int i : {pi, pj}) {
        auto cr = gws::i_curve_crossing(p, k, i);
        // Low branch (t = a_i) when i is the cyclic successor of k:
        // there the curve has x_i = x_j.  The other partner meets the
        // diagonal on the high branch at t = 1/a_i, where x_i = x_k.
        const double expect_t = (i == pi) ? p.a_d(i) : 1 / p.a_d(i);
        ASSERT_EQ(cr.t_on_curve, expect_t);
        auto on_diag = gws::i_curve(p, k, cr.tau0);
        ASSERT_LE(std::fabs(gws::lambda(p, on_diag, i)), 1e-10 * (1 + cr.tau0 * cr.tau0));
        // The same point through the curve parametrization at t_on_curve.
        auto on_curve = gws::curve_point(p, i, cr.t_on_curve);
        auto [ci, cj] = gws::cyclic_partners(i);
        const int equal_mate = (i == pi) ? ci : cj;
        ASSERT_NEAR(on_curve[i], on_curve[equal_mate], 1e-10 * on_curve[i]);
        ASSERT_NEAR(on_curve[i], cr.tau0, 1e-10 * cr.tau0);
        ASSERT_NEAR(on_curve[0], on_diag[0], 1e-9 * (on_diag[0] + 1));
        ASSERT_NEAR(on_curve[1], on_diag[1], 1e-9 * (on_diag[1] + 1));
        ASSERT_NEAR(on_curve[2], on_diag[2], 1e-9 * (on_diag[2] + 1));
      }
    }
  }
  auto p = space543();
  EXPECT_EQ(gws::i_curve_crossing(p, 2).t_on_curve, p.a_d(0));  // default target
  EXPECT_THROW(gws::i_curve_crossing(p, 1, 1), std::invalid_argument);
}

TEST(GradLambda, SymmetricPointValue) {
  // x = (1,1,1), p = (a,a,a): gradient (2a, 1-2a, 1-2a), all positive.
  auto p = GwsParams::from_rationals({1, 5}, {1, 5}, {1, 5});
  auto g = gws::grad_lambda(p, {1, 1, 1}, 0);
  EXPECT_NEAR(g[0], 0.4, 1e-15);
  EXPECT_NEAR(g[1], 0.6, 1e-15);
  EXPECT_NEAR(g[2], 0.6, 1e-15);
}

TEST(GradLambda, MatchesCentralDifferences) {
  gwstest::Rng rng(309);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = gwstest::random_params(rng);
    MetricPoint x{rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10), rng.log_uniform(0.1, 10)};
    for (int i = 0; i < 3; ++i) {
      auto g = gws::grad_lambda(p, x, i);
      for (int c = 0; c < 3; ++c) {
        double h = 1e-6 * x[c];
        MetricPoint up = x, dn = x;
        up[c] += h;
        dn[c] -= h;
        double fd = (gws::lambda(p, up, i) - gws::lambda(p, dn, i)) / (2 * h);
        ASSERT_NEAR(g[c], fd, 1e-6 * (std::fabs(g[c]) + 1));
      }
    }
  }
}

TEST(GradLambda, OnCurveSignPattern) {
  // In (i,j,k) components: (+, +, -) on the low branch, (+, -, +) on the
  // high branch; the i-component is positive on both (the normal points
  // into the region along its own coordinate).
  gwstest::Rng rng(310);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = gwstest::random_params(rng);
    int i = static_cast<int>(rng.integer(0, 2));
    auto [j, k] = gws::cyclic_partners(i);
    for (Branch b : {Branch::Low, Branch::High}) {
      double t = random_branch_t(rng, p, i, b);
      auto g = gws::grad_lambda(p, gws::curve_point(p, i, t), i);
      ASSERT_GT(g[i], 0.0);
      if (b == Branch::Low) {
        ASSERT_GT(g[j], 0.0);
        ASSERT_LT(g[k], 0.0);
      } else {
        ASSERT_LT(g[j], 0.0);
        ASSERT_GT(g[k], 0.0);
      }
    }
  }
}

TEST(FieldNormalProduct, MatchesScaledDotProduct) {
  // The closed form (F - G)/(2 a_i t x_i^2) equals (V . grad lambda_i)
  // divided by 2 x1 x2 x3, to full precision.
  gwstest::Rng rng(311);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = gwstest::random_params(rng);
    int i = static_cast<int>(rng.integer(0, 2));
    Branch b = rng.uniform01() < 0.5 ? Branch::Low : Branch::High;
    double t = random_branch_t(rng, p, i, b);
    auto x = gws::curve_point(p, i, t);
    auto v = gws::vector_field(p, x);
    auto g = gws::grad_lambda(p, x, i);
    double dot = (v[0] * g[0] + v[1] * g[1] + v[2] * g[2]) / (2 * x.x1 * x.x2 * x.x3);
    double closed = gws::field_normal_product(p, i, t);
    ASSERT_NEAR(closed, dot, 1e-9 * (std::fabs(dot) + 1e-6)) << "t=" << t;
  }
}

TEST(FieldNormalProduct, TermsPositiveOnValidIntervals) {
  gwstest::Rng rng(312);
  for (int trial = 0; trial < 2000; ++trial) {
    auto p = gwstest::random_params(rng);
    int i = static_cast<int>(rng.integer(0, 2));
    Branch b = rng.uniform01() < 0.5 ? Branch::Low : Branch::High;
    double t = random_branch_t(rng, p, i, b);
    auto terms = gws::field_normal_product_terms(p, i, t);
    ASSERT_GT(terms.F, 0.0) << "t=" << t;
    ASSERT_GT(terms.G, 0.0) << "t=" << t;
  }
}

TEST(AngleAlpha, NinetyDegreesIffProductVanishes) {
  auto p = space543();
  // Bracket the high-branch sign change of the product (it is positive just
  // above t13 and negative for large t), then compare angle behavior.
  double lo = gws::t_markers(p, 0).t_high, hi = 100.0;
  ASSERT_GT(gws::field_normal_product(p, 0, lo), 0.0);
  ASSERT_LT(gws::field_normal_product(p, 0, hi), 0.0);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (gws::field_normal_product(p, 0, mid) > 0 ? lo : hi) = mid;
  }
  double root = 0.5 * (lo + hi);
  EXPECT_LE(std::fabs(gws::field_normal_product(p, 0, root)), 1e-8);
  EXPECT_NEAR(gws::angle_alpha(p, 0, root), 90.0, 1e-3);
  // Inward side: angle below 90; outward side: above 90.
  EXPECT_LT(gws::angle_alpha(p, 0, root * 0.99), 90.0);
  EXPECT_GT(gws::angle_alpha(p, 0, root * 1.01), 90.0);
}

TEST(BoundarySamples, GridRespectsBranchAndOrdering) {
  auto p = space543();
  auto mk = gws::t_markers(p, 0);
  auto low = gws::boundary_samples(p, 0, Branch::Low, 64);
  auto high = gws::boundary_samples(p, 0, Branch::High, 64);
  ASSERT_EQ(low.size(), 64u);
  ASSERT_EQ(high.size(), 64u);
  EXPECT_NEAR(low.back().t, mk.t_low, 1e-12);
  EXPECT_NEAR(high.front().t, mk.t_high, 1e-12);
  for (std::size_t s = 1; s < low.size(); ++s) ASSERT_LT(low[s - 1].t, low[s].t);
  for (const auto& cs : low) {
    ASSERT_LE(cs.t, mk.t_low + 1e-12);
    ASSERT_LT(cs.t, p.m(0));
  }
  for (const auto& cs : high) ASSERT_GE(cs.t, mk.t_high - 1e-12);
  // Untrimmed grids extend beyond the corner markers but respect the guard.
  gws::BranchSamplingOptions untrimmed;
  untrimmed.trimmed = false;
  auto full_low = gws::boundary_samples(p, 0, Branch::Low, 64, untrimmed);
  EXPECT_GT(full_low.back().t, mk.t_low);
  EXPECT_LT(full_low.back().t, p.m(0));
  EXPECT_THROW(gws::boundary_samples(p, 0, Branch::Low, 1), std::invalid_argument);
}

}  // namespace
