#include "gwsflow/integrate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gwsflow/boundary.hpp"
#include "gwsflow/flow.hpp"
#include "gwsflow/geometry.hpp"
#include "gwsflow/signpoly.hpp"
#include "test_util.hpp"

namespace {

using gws::Branch;
using gws::EventKind;
using gws::GwsParams;
using gws::IntegrateOptions;
using gws::MetricPoint;
using gws::TerminalReason;
using gws::Trajectory;

GwsParams space543() { return GwsParams::from_rationals({5, 26}, {2, 13}, {3, 26}); }
GwsParams space14_7_4() { return GwsParams::from_rationals({7, 23}, {7, 46}, {2, 23}); }
GwsParams space15_14_13() { return GwsParams::from_rationals({3, 16}, {7, 40}, {13, 80}); }

// A point at (signed) normal offset eps from the curve r_i at parameter t:
// eps > 0 lands inside R (lambda_i > 0), eps < 0 outside.
MetricPoint offset_from_curve(const GwsParams& p, int i, double t, double eps) {
  const MetricPoint cp = gws::curve_point(p, i, t);
  const auto g = gws::grad_lambda(p, cp, i);
  const double gn = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  return {cp.x1 + eps * g[0] / gn, cp.x2 + eps * g[1] / gn, cp.x3 + eps * g[2] / gn};
}

MetricPoint random_point_in_R(const GwsParams& p, gwstest::Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x1 = rng.log_uniform(0.5, 2.0);
    const double x2 = rng.log_uniform(0.5, 2.0);
    const MetricPoint x = gws::volume_section_lift(p, x1, x2);
    if (gws::in_region_R(p, x) && x.x3 > 1e-3 && x.x3 < 1e3) return x;
  }
  throw std::runtime_error("no point of R found");
}

TEST(Integrate, StationaryAtSymmetricEquilibrium) {
  auto p = GwsParams::from_rationals({1, 5}, {1, 5}, {1, 5});
  auto tr = gws::integrate(p, {1, 1, 1}, 50.0);
  EXPECT_EQ(tr.terminal, TerminalReason::Stationary);
  EXPECT_TRUE(tr.events.empty());
  ASSERT_EQ(tr.samples.size(), 1u);
  EXPECT_EQ(tr.samples.front().t, 0.0);
  EXPECT_EQ(tr.samples.front().x, (MetricPoint{1, 1, 1}));
  EXPECT_EQ(tr.volume_drift_max, 0.0);
  EXPECT_TRUE(gws::detect_crossings(tr).empty());
}

TEST(Integrate, RejectsBadArguments) {
  auto p = space543();
  EXPECT_THROW(gws::integrate(p, {1, 1, 1}, 0.0), std::invalid_argument);
  EXPECT_THROW(gws::integrate(p, {1, -1, 1}, 1.0), std::domain_error);
}

TEST(Integrate, ExampleSpaceExitsOnceAndNeverReturns) {
  // Inside R near the high-branch arc of r_1 beyond the turning point K_2
  // (t = 8 > t_2 ~ 5.9656): the trajectory exits through lambda_1 and never
  // re-enters within the horizon.
  auto p = space543();
  const MetricPoint x0 = offset_from_curve(p, 0, 8.0, 1e-3);
  ASSERT_TRUE(gws::in_region_R(p, x0));
  auto tr = gws::integrate(p, x0, 100.0);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_EQ(tr.events[0].i, 0);
  EXPECT_EQ(tr.events[0].kind, EventKind::Exit);
  EXPECT_LE(std::fabs(tr.events[0].lambda_value), 1e-8);
  for (const auto& e : tr.events) EXPECT_NE(e.kind, EventKind::Enter);
  EXPECT_LE(tr.volume_drift_max, 1e-6);

  // detect_crossings reproduces the event list of the stored samples.
  auto redo = gws::detect_crossings(tr);
  ASSERT_EQ(redo.size(), tr.events.size());
  EXPECT_EQ(redo[0].t, tr.events[0].t);
  EXPECT_EQ(redo[0].i, tr.events[0].i);
  EXPECT_EQ(redo[0].kind, tr.events[0].kind);
}

TEST(Integrate, AllPreservedSpaceHasNoExitEvents) {
  // (15,14,13): every curve points inward, so no trajectory started in R
  // produces an exit event.
  auto p = space15_14_13();
  gwstest::Rng rng(601);
  for (int trial = 0; trial < 100; ++trial) {
    const MetricPoint x0 = random_point_in_R(p, rng);
    auto tr = gws::integrate(p, x0, 100.0);
    for (const auto& e : tr.events) ASSERT_NE(e.kind, EventKind::Exit);
    for (const auto& s : tr.samples) ASSERT_TRUE(s.inR);
  }
}

TEST(Integrate, EnterExitEnterScenario) {
  // (14,7,4) seeded just outside R against the high branch of r_1 at
  // t = 3.6, inside the window between the corner t_13 and the root t_2:
  // the trajectory enters R, leaves through the outward arc (t_2, t_4),
  // and returns for good past t_4.
  auto p = space14_7_4();
  const MetricPoint x0 = offset_from_curve(p, 0, 3.6, -1e-3);
  ASSERT_LT(gws::lambda(p, x0, 0), 0.0);
  auto tr = gws::integrate(p, x0, 100.0);
  ASSERT_EQ(tr.events.size(), 3u);
  EXPECT_EQ(tr.events[0].kind, EventKind::Enter);
  EXPECT_EQ(tr.events[1].kind, EventKind::Exit);
  EXPECT_EQ(tr.events[2].kind, EventKind::Enter);
  for (const auto& e : tr.events) {
    EXPECT_EQ(e.i, 0);
    EXPECT_LE(std::fabs(e.lambda_value), 1e-8);
  }
  EXPECT_LT(tr.events[0].t, tr.events[1].t);
  EXPECT_LT(tr.events[1].t, tr.events[2].t);
  // After the final enter event the trajectory stays in R.
  for (const auto& s : tr.samples) {
    if (s.t > tr.events[2].t) {
      ASSERT_TRUE(s.inR);
    }
  }
  // The re-derived list matches.
  auto redo = gws::detect_crossings(tr);
  ASSERT_EQ(redo.size(), 3u);
  for (std::size_t n = 0; n < redo.size(); ++n) {
    EXPECT_EQ(redo[n].t, tr.events[n].t);
    EXPECT_EQ(redo[n].kind, tr.events[n].kind);
  }
}

TEST(Integrate, VolumeDriftStaysSmall) {
  gwstest::Rng rng(602);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = gwstest::random_params(rng);
    MetricPoint x0{0, 0, 0};
    try {
      x0 = random_point_in_R(p, rng);
    } catch (const std::runtime_error&) {
      continue;  // region too thin to sample; skip
    }
    auto tr = gws::integrate(p, x0, 50.0);
    ASSERT_LE(tr.volume_drift_max, 1e-6) << "drift at trial " << trial;
    // Sample times strictly increase, and inR only changes across intervals
    // containing events.
    for (std::size_t n = 0; n + 1 < tr.samples.size(); ++n) {
      ASSERT_LT(tr.samples[n].t, tr.samples[n + 1].t);
      const bool flipped = tr.samples[n].inR != tr.samples[n + 1].inR;
      if (flipped) {
        bool has_event = false;
        for (const auto& e : tr.events)
          has_event |= e.t >= tr.samples[n].t && e.t <= tr.samples[n + 1].t;
        ASSERT_TRUE(has_event) << "inR flip without event near t=" << tr.samples[n].t;
      }
    }
  }
}

TEST(Integrate, EventInvariantsOnEventfulTrajectories) {
  // Spaces with sum < 1/2 always develop an exit; events must sit on the
  // cone within 1e-8 and be bracketed by samples of opposite sign (except
  // when a crossing pair hides inside one step).
  gwstest::Rng rng(603);
  int events_seen = 0;
  for (int trial = 0; trial < 15; ++trial) {
    auto p = gwstest::random_params_with_theta_sign(rng, -1);
    MetricPoint x0{0, 0, 0};
    try {
      x0 = random_point_in_R(p, rng);
    } catch (const std::runtime_error&) {
      continue;
    }
    auto tr = gws::integrate(p, x0, 50.0);
    for (const auto& e : tr.events) {
      if (e.kind == EventKind::Touch) continue;
      ++events_seen;
      // Absolute placement tolerance at ordinary scales; proportional to the
      // cone-function magnitude when the crossing happens during blow-up,
      // where binary64 time resolution bounds how close the root can get.
      const auto [j, k] = gws::cyclic_partners(e.i);
      const double sq = e.x[0] * e.x[0] + e.x[1] * e.x[1] + e.x[2] * e.x[2];
      const double lam_scale = p.a_d(e.i) * sq + e.x[j] * e.x[k];
      ASSERT_LE(std::fabs(e.lambda_value), std::max(1e-8, 1e-10 * lam_scale));
      // Locate the bracketing samples.
      std::size_t n = 0;
      while (n + 1 < tr.samples.size() && tr.samples[n + 1].t < e.t) ++n;
      ASSERT_LT(n + 1, tr.samples.size());
      int crossings_inside = 0;
      for (const auto& o : tr.events)
        if (o.kind != EventKind::Touch && o.i == e.i && o.t >= tr.samples[n].t &&
            o.t <= tr.samples[n + 1].t)
          ++crossings_inside;
      const double la = tr.samples[n].lambda[e.i];
      const double lb = tr.samples[n + 1].lambda[e.i];
      if (crossings_inside % 2 == 1) {
        ASSERT_LT(la * lb, 0.0);
      } else {
        ASSERT_GT(la * lb, 0.0);
      }
    }
  }
  EXPECT_GT(events_seen, 0);
}

TEST(Integrate, ReductionCommutesWithIntegration) {
  // Equal parameters give a stable symmetric equilibrium, so this start
  // survives the whole horizon inside the box.
  auto p = GwsParams::from_rationals({2, 9}, {2, 9}, {2, 9});
  const double x1 = 1.1, x2 = 0.95;
  const MetricPoint lifted = gws::volume_section_lift(p, x1, x2);
  auto tr3 = gws::integrate(p, lifted, 10.0);
  auto tr2 = gws::integrate_reduced(p, x1, x2, 10.0);
  ASSERT_EQ(tr3.terminal, TerminalReason::HorizonReached);
  ASSERT_EQ(tr2.terminal, TerminalReason::HorizonReached);
  EXPECT_NEAR(tr3.samples.back().x.x1, tr2.samples.back().x1, 1e-6);
  EXPECT_NEAR(tr3.samples.back().x.x2, tr2.samples.back().x2, 1e-6);
  // Intermediate checkpoints through shorter horizons.
  for (double T : {2.5, 5.0}) {
    auto a = gws::integrate(p, lifted, T);
    auto b = gws::integrate_reduced(p, x1, x2, T);
    ASSERT_EQ(a.terminal, TerminalReason::HorizonReached);
    ASSERT_EQ(b.terminal, TerminalReason::HorizonReached);
    EXPECT_NEAR(a.samples.back().x.x1, b.samples.back().x1, 1e-6);
    EXPECT_NEAR(a.samples.back().x.x2, b.samples.back().x2, 1e-6);
  }
}

TEST(Integrate, LeavesBoxOnBlowup) {
  // sum < 1/2 flows collapse: coordinates leave the box and the terminal
  // status says so.
  auto p = space543();
  const MetricPoint x0 = offset_from_curve(p, 0, 8.0, 1e-3);
  IntegrateOptions opts;
  opts.box_hi = 1e3;  // tighter box to make the exit quick
  auto tr = gws::integrate(p, x0, 1e4, opts);
  ASSERT_EQ(tr.terminal, TerminalReason::LeftBox);
  const auto& last = tr.samples.back().x;
  EXPECT_TRUE(last.x1 > opts.box_hi || last.x2 > opts.box_hi || last.x3 > opts.box_hi ||
              last.x1 < opts.box_lo || last.x2 < opts.box_lo || last.x3 < opts.box_lo);
}

TEST(Integrate, RenormalizationPinsVolume) {
  auto p = space15_14_13();
  const MetricPoint x0 = gws::volume_section_lift(p, 1.3, 0.8);
  IntegrateOptions opts;
  opts.renormalize_every = 8;
  auto tr = gws::integrate(p, x0, 50.0, opts);
  IntegrateOptions plain;
  auto ref = gws::integrate(p, x0, 50.0, plain);
  EXPECT_LE(tr.volume_drift_max, ref.volume_drift_max + 1e-12);
  EXPECT_LE(tr.volume_drift_max, 1e-9);
}

TEST(DetectCrossings, TangentSpaceTouchIsObservable) {
  // (12,3,2) has double roots of h on r_1: a trajectory shadowing the
  // tangency point may register a touch event without any sign change.
  // Construct a start exactly on the curve at the low-branch double root:
  // the field is tangent there, so lambda_1 stays near zero momentarily.
  auto p = GwsParams::from_rationals({2, 5}, {1, 10}, {1, 15});
  auto sp = gws::roots_h(p, 0);
  ASSERT_EQ(sp.roots.size(), 2u);
  const double t_dbl = sp.roots[0].t;  // low-branch double root
  const MetricPoint x0 = offset_from_curve(p, 0, t_dbl, 1e-9);
  auto tr = gws::integrate(p, x0, 5.0);
  // Whatever the event list contains, no crossing may flip inR permanently:
  // the trajectory remains in the closure of R.
  for (const auto& s : tr.samples) {
    EXPECT_GT(s.lambda[0], -1e-7)
        << "lambda_1 dipped below the tangency tolerance at t=" << s.t;
  }
}

}  // namespace
