#pragma once

// Trajectory integration for the normalized Ricci flow system and
// region-crossing event detection.
//
// The integrator is an explicit embedded Dormand-Prince 5(4) pair with
// first-same-as-last stage reuse and a PI step-size controller.  Events
// (sign changes of the cone functions lambda_i along the solution) are
// located by bisection on the one-substep map from the bracketing accepted
// step, which keeps event states consistent with the order-5 solution.
// Tangencies are found by bisecting the derivative of lambda_i to the
// interior extremum whenever it changes direction inside a step without an
// endpoint sign change.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwsflow/boundary.hpp"
#include "gwsflow/flow.hpp"
#include "gwsflow/geometry.hpp"
#include "gwsflow/params.hpp"

namespace gws {

enum class EventKind { Exit, Enter, Touch };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Exit: return "exit";
    case EventKind::Enter: return "enter";
    case EventKind::Touch: return "touch";
  }
  return "?";
}

enum class TerminalReason { HorizonReached, LeftBox, StepFailure, Stationary };

inline const char* to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::HorizonReached: return "horizon-reached";
    case TerminalReason::LeftBox: return "left-box";
    case TerminalReason::StepFailure: return "step-failure";
    case TerminalReason::Stationary: return "stationary";
  }
  return "?";
}

struct IntegrateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 1.0;
  double initial_step = 0.0;  // 0 = choose automatically
  double box_lo = 1e-6;       // terminal bounds on every coordinate
  double box_hi = 1e6;
  double event_time_tol = 1e-10;
  double touch_threshold = 1e-10;
  // Per-step cap on the first-integral drift |log Vol(x_{n+1}) - log Vol(x_n)|,
  // enforced through step control; <= 0 disables.
  double vol_step_tol = 1e-10;
  int renormalize_every = 0;  // project onto unit volume every N steps; 0 = off
};

struct TrajectorySample {
  double t;
  MetricPoint x;
  std::array<double, 3> lambda;
  bool inR;
};

struct FlowEvent {
  double t;
  int i;
  EventKind kind;
  MetricPoint x;
  double lambda_value;
};

struct Trajectory {
  GwsParams params;
  IntegrateOptions options;
  std::vector<TrajectorySample> samples;
  std::vector<FlowEvent> events;
  TerminalReason terminal = TerminalReason::HorizonReached;
  double volume_drift_max = 0.0;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

namespace detail {

constexpr double kQuietNan = std::numeric_limits<double>::quiet_NaN();

// Dormand-Prince 5(4) tableau.
struct Dp5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(order5) - b(order4): error estimator weights (stage 2 weight is zero).
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
bool finite(const Vec<N>& v) {
  for (double c : v)
    if (!std::isfinite(c)) return false;
  return true;
}

// One embedded step of size h from x with k1 = f(x) already evaluated.
// On return: x_new, the FSAL stage k7 = f(x_new), and the raw error vector.
template <std::size_t N, class F>
void dp5_step(F&& f, const Vec<N>& x, const Vec<N>& k1, double h, Vec<N>& x_new,
              Vec<N>& k7, Vec<N>& err) {
  using T = Dp5;
  Vec<N> k2, k3, k4, k5, k6, y;
  for (std::size_t n = 0; n < N; ++n) y[n] = x[n] + h * T::a21 * k1[n];
  k2 = f(y);
  for (std::size_t n = 0; n < N; ++n) y[n] = x[n] + h * (T::a31 * k1[n] + T::a32 * k2[n]);
  k3 = f(y);
  for (std::size_t n = 0; n < N; ++n)
    y[n] = x[n] + h * (T::a41 * k1[n] + T::a42 * k2[n] + T::a43 * k3[n]);
  k4 = f(y);
  for (std::size_t n = 0; n < N; ++n)
    y[n] = x[n] + h * (T::a51 * k1[n] + T::a52 * k2[n] + T::a53 * k3[n] + T::a54 * k4[n]);
  k5 = f(y);
  for (std::size_t n = 0; n < N; ++n)
    y[n] = x[n] + h * (T::a61 * k1[n] + T::a62 * k2[n] + T::a63 * k3[n] + T::a64 * k4[n] +
                       T::a65 * k5[n]);
  k6 = f(y);
  for (std::size_t n = 0; n < N; ++n)
    x_new[n] = x[n] + h * (T::b1 * k1[n] + T::b3 * k3[n] + T::b4 * k4[n] + T::b5 * k5[n] +
                           T::b6 * k6[n]);
  k7 = f(x_new);
  for (std::size_t n = 0; n < N; ++n)
    err[n] = h * (T::e1 * k1[n] + T::e3 * k3[n] + T::e4 * k4[n] + T::e5 * k5[n] +
                  T::e6 * k6[n] + T::e7 * k7[n]);
}

template <std::size_t N>
double error_norm(const Vec<N>& err, const Vec<N>& x, const Vec<N>& x_new, double atol,
                  double rtol) {
  double sum = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const double w = atol + rtol * std::max(std::fabs(x[n]), std::fabs(x_new[n]));
    const double q = err[n] / w;
    sum += q * q;
  }
  return std::sqrt(sum / N);
}

// Initial step heuristic (Hairer-Norsett-Wanner style).
template <std::size_t N, class F>
double initial_step(F&& f, const Vec<N>& x, const Vec<N>& k1, double atol, double rtol,
                    double max_step) {
  double d0 = 0, d1 = 0;
  for (std::size_t n = 0; n < N; ++n) {
    const double w = atol + rtol * std::fabs(x[n]);
    d0 += (x[n] / w) * (x[n] / w);
    d1 += (k1[n] / w) * (k1[n] / w);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, max_step);
  Vec<N> x1;
  for (std::size_t n = 0; n < N; ++n) x1[n] = x[n] + h0 * k1[n];
  Vec<N> f1 = f(x1);
  double d2 = 0;
  if (finite(f1)) {
    for (std::size_t n = 0; n < N; ++n) {
      const double w = atol + rtol * std::fabs(x[n]);
      const double q = (f1[n] - k1[n]) / w;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / N) / h0;
  }
  const double dm = std::max(d1, d2);
  const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min({100 * h0, h1, max_step});
}

// Field evaluation guarded against leaving the positive octant; NaN output
// forces a step rejection.
inline Vec<3> guarded_field(const GwsParams& p, const Vec<3>& x) {
  if (!(x[0] > 0.0 && x[1] > 0.0 && x[2] > 0.0)) return {kQuietNan, kQuietNan, kQuietNan};
  return vector_field(p, MetricPoint{x[0], x[1], x[2]});
}

inline double lambda_at(const GwsParams& p, const Vec<3>& x, int i) {
  return lambda(p, MetricPoint{x[0], x[1], x[2]}, i);
}

inline double lambda_rate(const GwsParams& p, const Vec<3>& x, int i) {
  const MetricPoint m{x[0], x[1], x[2]};
  const auto g = grad_lambda(p, m, i);
  const auto f = vector_field(p, m);
  return g[0] * f[0] + g[1] * f[1] + g[2] * f[2];
}

// State along [0, h] reachable through a single order-5 substep from x_a.
class SubstepMap {
 public:
  SubstepMap(const GwsParams& p, const Vec<3>& x_a) : p_(p), x_a_(x_a) {
    k1_ = guarded_field(p, x_a);
  }

  Vec<3> operator()(double dt) const {
    if (dt <= 0) return x_a_;
    Vec<3> x_new, k7, err;
    dp5_step<3>([this](const Vec<3>& z) { return guarded_field(p_, z); }, x_a_, k1_, dt,
                x_new, k7, err);
    return x_new;
  }

 private:
  const GwsParams& p_;
  Vec<3> x_a_;
  Vec<3> k1_;
};

// Locate one sign change of lambda_i inside (lo, hi] by bisection on the
// substep map; lam_lo and lam_hi must have opposite (non-zero) signs.
inline FlowEvent refine_crossing(const GwsParams& p, const SubstepMap& map, double t_a,
                                 int i, double lo, double hi, double lam_lo,
                                 double time_tol) {
  const bool was_positive = lam_lo > 0;
  double lam_hi = lambda_at(p, map(hi), i);
  while (hi - lo > time_tol) {
    const double mid = 0.5 * (lo + hi);
    const double lam_mid = lambda_at(p, map(mid), i);
    if ((lam_mid > 0) == (lam_lo > 0)) {
      lo = mid;
      lam_lo = lam_mid;
    } else {
      hi = mid;
      lam_hi = lam_mid;
    }
  }
  // Polish with regula falsi inside the final bracket so the reported state
  // sits on the cone even when lambda varies steeply in time.
  double t_star = 0.5 * (lo + hi);
  double lam_star = lambda_at(p, map(t_star), i);
  for (int iter = 0; iter < 25 && std::fabs(lam_star) > 1e-9; ++iter) {
    if ((lam_star > 0) == (lam_lo > 0)) {
      lo = t_star;
      lam_lo = lam_star;
    } else {
      hi = t_star;
      lam_hi = lam_star;
    }
    const double denom = lam_hi - lam_lo;
    double next = (denom != 0) ? lo - lam_lo * (hi - lo) / denom : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;  // bracket exhausted in binary64
    t_star = next;
    lam_star = lambda_at(p, map(t_star), i);
  }
  const Vec<3> x_star = map(t_star);
  FlowEvent ev;
  ev.t = t_a + t_star;
  ev.i = i;
  ev.kind = was_positive ? EventKind::Exit : EventKind::Enter;
  ev.x = MetricPoint{x_star[0], x_star[1], x_star[2]};
  ev.lambda_value = lam_star;
  return ev;
}

// Scan one accepted interval [t_a, t_a + h] (state x_a at the left end) for
// crossings, tangencies, and interior sign dips of every lambda_i.
// Appends events in increasing time order within the interval.
inline void scan_interval(const GwsParams& p, double t_a, const Vec<3>& x_a, double h,
                          const IntegrateOptions& opts, std::vector<FlowEvent>& out) {
  if (!(h > 0)) return;
  const SubstepMap map(p, x_a);
  const Vec<3> x_b = map(h);
  if (!finite(x_b) || !(x_b[0] > 0 && x_b[1] > 0 && x_b[2] > 0)) return;
  std::vector<FlowEvent> local;
  for (int i = 0; i < 3; ++i) {
    const double lam_a = lambda_at(p, x_a, i);
    const double lam_b = lambda_at(p, x_b, i);
    if ((lam_a > 0) != (lam_b > 0)) {
      local.push_back(refine_crossing(p, map, t_a, i, 0.0, h, lam_a, opts.event_time_tol));
      continue;
    }
    // Same sign at both ends: look for an interior extremum dipping toward
    // (or through) zero.
    const double rate_a = lambda_rate(p, x_a, i);
    const double rate_b = lambda_rate(p, x_b, i);
    if (!(rate_a * rate_b < 0)) continue;
    double lo = 0.0, hi = h, r_lo = rate_a;
    while (hi - lo > opts.event_time_tol) {
      const double mid = 0.5 * (lo + hi);
      const Vec<3> x_mid = map(mid);
      if (!finite(x_mid) || !(x_mid[0] > 0 && x_mid[1] > 0 && x_mid[2] > 0)) break;
      const double r_mid = lambda_rate(p, x_mid, i);
      if ((r_mid > 0) == (r_lo > 0)) {
        lo = mid;
        r_lo = r_mid;
      } else {
        hi = mid;
      }
    }
    const double dt_star = 0.5 * (lo + hi);
    const Vec<3> x_star = map(dt_star);
    if (!finite(x_star)) continue;
    const double lam_star = lambda_at(p, x_star, i);
    if ((lam_star > 0) != (lam_a > 0) && lam_star != 0.0) {
      // The extremum overshoots zero: a crossing pair hides inside the step.
      local.push_back(
          refine_crossing(p, map, t_a, i, 0.0, dt_star, lam_a, opts.event_time_tol));
      local.push_back(refine_crossing(p, map, t_a, i, dt_star, h, lam_star,
                                      opts.event_time_tol));
    } else if (std::fabs(lam_star) < opts.touch_threshold) {
      FlowEvent ev;
      ev.t = t_a + dt_star;
      ev.i = i;
      ev.kind = EventKind::Touch;
      ev.x = MetricPoint{x_star[0], x_star[1], x_star[2]};
      ev.lambda_value = lam_star;
      local.push_back(ev);
    }
  }
  std::sort(local.begin(), local.end(),
            [](const FlowEvent& a, const FlowEvent& b) { return a.t < b.t; });
  out.insert(out.end(), local.begin(), local.end());
}

}  // namespace detail

/// Integrate the flow from x0 over [0, horizon].
inline Trajectory integrate(const GwsParams& p, const MetricPoint& x0, double horizon,
                            const IntegrateOptions& opts = {}) {
  if (!(horizon > 0)) throw std::invalid_argument("integrate: horizon must be positive");
  require_positive(x0);

  Trajectory traj{p, opts, {}, {}, TerminalReason::HorizonReached, 0.0, 0, 0};
  const double log_vol0 = log_volume(p, x0);

  auto field = [&p](const detail::Vec<3>& z) { return detail::guarded_field(p, z); };
  detail::Vec<3> x = x0.array();
  detail::Vec<3> k1 = field(x);

  const auto record = [&](double t) {
    TrajectorySample s;
    s.t = t;
    s.x = MetricPoint{x[0], x[1], x[2]};
    s.lambda = lambdas(p, s.x);
    s.inR = s.lambda[0] > 0 && s.lambda[1] > 0 && s.lambda[2] > 0;
    traj.samples.push_back(s);
    const double drift = std::fabs(std::expm1(log_volume(p, s.x) - log_vol0));
    traj.volume_drift_max = std::max(traj.volume_drift_max, drift);
  };
  record(0.0);

  // Equilibrium short-circuit: a stationary start stays put.
  {
    double fmax = 0, xmax = 0;
    for (int n = 0; n < 3; ++n) {
      fmax = std::max(fmax, std::fabs(k1[n]));
      xmax = std::max(xmax, std::fabs(x[n]));
    }
    if (fmax <= 1e-14 * std::max(1.0, xmax)) {
      traj.terminal = TerminalReason::Stationary;
      return traj;
    }
  }

  double h = (opts.initial_step > 0)
                 ? std::min(opts.initial_step, opts.max_step)
                 : detail::initial_step<3>(field, x, k1, opts.atol, opts.rtol, opts.max_step);
  double err_prev = 1e-4;
  double t = 0.0;
  int steps_since_renorm = 0;

  while (t < horizon) {
    h = std::min(h, horizon - t);
    const double h_min = 1e-13 * std::max(1.0, std::fabs(t));
    if (h < h_min) {
      traj.terminal = TerminalReason::StepFailure;
      return traj;
    }
    detail::Vec<3> x_new, k7, err_vec;
    detail::dp5_step<3>(field, x, k1, h, x_new, k7, err_vec);
    double err = detail::finite(err_vec) && detail::finite(x_new)
                     ? detail::error_norm<3>(err_vec, x, x_new, opts.atol, opts.rtol)
                     : std::numeric_limits<double>::infinity();
    if (std::isfinite(err) && opts.vol_step_tol > 0 && x_new[0] > 0 && x_new[1] > 0 &&
        x_new[2] > 0) {
      // Fold the conserved-volume violation into the error measure with the
      // same h^6 local scaling as the embedded estimate.
      const double dlv = std::fabs(log_volume(p, MetricPoint{x_new[0], x_new[1], x_new[2]}) -
                                   log_volume(p, MetricPoint{x[0], x[1], x[2]}));
      err = std::max(err, std::pow(dlv / opts.vol_step_tol, 5.0 / 6.0));
    }
    if (err <= 1.0) {
      detail::scan_interval(p, t, x, h, opts, traj.events);
      t += h;
      x = x_new;
      k1 = k7;
      ++traj.steps_accepted;
      bool renormalized = false;
      if (opts.renormalize_every > 0 && ++steps_since_renorm >= opts.renormalize_every) {
        const MetricPoint proj =
            normalize_to_unit_volume(p, MetricPoint{x[0], x[1], x[2]});
        x = proj.array();
        k1 = field(x);
        steps_since_renorm = 0;
        renormalized = true;
      }
      record(t);
      if (x[0] < opts.box_lo || x[0] > opts.box_hi || x[1] < opts.box_lo ||
          x[1] > opts.box_hi || x[2] < opts.box_lo || x[2] > opts.box_hi) {
        traj.terminal = TerminalReason::LeftBox;
        return traj;
      }
      // PI controller (order 5: alpha = 0.17, beta = 0.04).
      double fac = (err <= 0) ? 10.0
                              : 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, 10.0);
      h = std::min(h * fac, opts.max_step);
      err_prev = std::max(err, 1e-10);
      if (renormalized) err_prev = 1e-4;
    } else {
      ++traj.steps_rejected;
      const double fac =
          std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.7) : 0.1;
      h *= fac;
    }
  }
  traj.terminal = TerminalReason::HorizonReached;
  return traj;
}

/// Re-derive the event list of a trajectory from its recorded samples.
/// Uses the same interval scanner as integrate(), so for a trajectory
/// produced by integrate() this reproduces its events.
inline std::vector<FlowEvent> detect_crossings(const GwsParams& p,
                                               const std::vector<TrajectorySample>& samples,
                                               const IntegrateOptions& opts = {}) {
  std::vector<FlowEvent> out;
  for (std::size_t n = 0; n + 1 < samples.size(); ++n) {
    const double h = samples[n + 1].t - samples[n].t;
    detail::scan_interval(p, samples[n].t, samples[n].x.array(), h, opts, out);
  }
  return out;
}

inline std::vector<FlowEvent> detect_crossings(const Trajectory& traj) {
  return detect_crossings(traj.params, traj.samples, traj.options);
}

/// Reduced two-dimensional integration on the unit-volume section.
struct ReducedSample {
  double t;
  double x1;
  double x2;
};

struct ReducedTrajectory {
  std::vector<ReducedSample> samples;
  TerminalReason terminal = TerminalReason::HorizonReached;
  long steps_accepted = 0;
  long steps_rejected = 0;
};

inline ReducedTrajectory integrate_reduced(const GwsParams& p, double x1, double x2,
                                           double horizon,
                                           const IntegrateOptions& opts = {}) {
  if (!(horizon > 0)) throw std::invalid_argument("integrate_reduced: horizon must be positive");
  if (!(x1 > 0 && x2 > 0))
    throw std::domain_error("integrate_reduced: coordinates must be positive");

  auto field = [&p](const detail::Vec<2>& z) -> detail::Vec<2> {
    if (!(z[0] > 0 && z[1] > 0)) return {detail::kQuietNan, detail::kQuietNan};
    const auto f = reduced_field(p, z[0], z[1]);
    return {f[0], f[1]};
  };

  ReducedTrajectory traj;
  detail::Vec<2> x{x1, x2};
  detail::Vec<2> k1 = field(x);
  traj.samples.push_back({0.0, x[0], x[1]});

  {
    const double fmax = std::max(std::fabs(k1[0]), std::fabs(k1[1]));
    const double xmax = std::max(std::fabs(x[0]), std::fabs(x[1]));
    if (fmax <= 1e-14 * std::max(1.0, xmax)) {
      traj.terminal = TerminalReason::Stationary;
      return traj;
    }
  }

  double h = (opts.initial_step > 0)
                 ? std::min(opts.initial_step, opts.max_step)
                 : detail::initial_step<2>(field, x, k1, opts.atol, opts.rtol, opts.max_step);
  double err_prev = 1e-4;
  double t = 0.0;
  while (t < horizon) {
    h = std::min(h, horizon - t);
    const double h_min = 1e-13 * std::max(1.0, std::fabs(t));
    if (h < h_min) {
      traj.terminal = TerminalReason::StepFailure;
      return traj;
    }
    detail::Vec<2> x_new, k7, err_vec;
    detail::dp5_step<2>(field, x, k1, h, x_new, k7, err_vec);
    double err = detail::finite(err_vec) && detail::finite(x_new)
                     ? detail::error_norm<2>(err_vec, x, x_new, opts.atol, opts.rtol)
                     : std::numeric_limits<double>::infinity();
    if (err <= 1.0) {
      t += h;
      x = x_new;
      k1 = k7;
      ++traj.steps_accepted;
      traj.samples.push_back({t, x[0], x[1]});
      if (x[0] < opts.box_lo || x[0] > opts.box_hi || x[1] < opts.box_lo ||
          x[1] > opts.box_hi) {
        traj.terminal = TerminalReason::LeftBox;
        return traj;
      }
      double fac = (err <= 0) ? 10.0
                              : 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, 10.0);
      h = std::min(h * fac, opts.max_step);
      err_prev = std::max(err, 1e-10);
    } else {
      ++traj.steps_rejected;
      const double fac =
          std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.7) : 0.1;
      h *= fac;
    }
  }
  return traj;
}

}  // namespace gws
