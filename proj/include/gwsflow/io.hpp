#pragma once

// Serialization of library results.
//
// Two formats are produced:
//
//   * CSV, RFC 4180 with one extension: lines starting with "# " before the
//     header row carry "key: value" metadata (tool version, configuration
//     echo, seed, tolerances), so every file is self-describing while the
//     data block stays parseable by any standard CSV reader that skips
//     comments.  Binary64 values are written with %.17g and round-trip.
//   * JSON with stable key order (insertion order is preserved), so a fixed
//     configuration always serializes to byte-identical output.
//
// Indices in all emitted artifacts are 1-based (x1, x2, x3, lambda1, ...);
// the 0-based convention stays internal to the library.

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gwsflow/boundary.hpp"
#include "gwsflow/catalog.hpp"
#include "gwsflow/classify.hpp"
#include "gwsflow/geometry.hpp"
#include "gwsflow/integrate.hpp"
#include "gwsflow/params.hpp"
#include "gwsflow/signpoly.hpp"

namespace gws {

/// JSON document type with insertion-ordered keys (deterministic dumps).
using Json = nlohmann::ordered_json;

/// Ordered metadata block prepended to CSV outputs.
using MetaList = std::vector<std::pair<std::string, std::string>>;

/// Shortest exact decimal rendering of a binary64 value (17 significant
/// digits guarantee round-trip).
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 field quoting: fields containing a comma, quote, or line break
/// are wrapped in double quotes with embedded quotes doubled.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Line-oriented CSV emitter: metadata comments, then one header row, then
/// data rows.  Methods enforce that ordering.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void metadata(const std::string& key, const std::string& value) {
    if (header_written_) throw std::logic_error("CSV metadata must precede the header row");
    os_ << "# " << key << ": " << value << "\n";
  }

  void comment(const std::string& line) { os_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& names) {
    if (header_written_) throw std::logic_error("CSV header row written twice");
    write_row(names);
    header_written_ = true;
  }

  void row(const std::vector<std::string>& fields) {
    if (!header_written_) throw std::logic_error("CSV data row before header row");
    write_row(fields);
  }

 private:
  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_field(fields[i]);
    }
    os_ << "\n";
  }

  std::ostream& os_;
  bool header_written_ = false;
};

// ---------------------------------------------------------------------------
// Parameter parsing
// ---------------------------------------------------------------------------

/// A parameter triple parsed from the command line, plus the route it took:
/// tokens written as fractions or integers construct exact parameters, while
/// any decimal or scientific token demotes the whole triple to the inexact
/// binary64 path (callers should warn, since order predicates then carry a
/// tie band instead of being decided over the rationals).
struct ParsedTriple {
  GwsParams params;
  bool decimal_input;
};

namespace detail {

inline std::vector<std::string> split_triple(const std::string& spec) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : spec) {
    if (c == ',') {
      tokens.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  tokens.push_back(cur);
  if (tokens.size() != 3)
    throw std::invalid_argument("expected three comma-separated values, got \"" + spec + "\"");
  for (const std::string& t : tokens)
    if (t.empty()) throw std::invalid_argument("empty component in parameter triple \"" + spec + "\"");
  return tokens;
}

inline double parse_strict_double(const std::string& s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed decimal \"" + s + "\"");
  return v;
}

}  // namespace detail

/// Parses "a1,a2,a3" where each component is "p/q", an integer, or a
/// decimal.  Fraction/integer triples take the exact path; a decimal or
/// scientific component anywhere routes the triple through binary64.
/// Throws std::invalid_argument on malformed input and std::domain_error
/// when a value falls outside (0, 1/2).
inline ParsedTriple parse_triple(const std::string& spec) {
  const auto tok = detail::split_triple(spec);
  bool decimal = false;
  for (const std::string& t : tok)
    if (t.find_first_of(".eE") != std::string::npos) decimal = true;
  if (decimal) {
    // Fraction tokens mixed into a decimal triple still parse; the triple as
    // a whole takes the binary64 route.
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i)
      v[static_cast<std::size_t>(i)] = tok[static_cast<std::size_t>(i)].find('/') != std::string::npos
                                           ? to_double(rational_from_string(tok[static_cast<std::size_t>(i)]))
                                           : detail::parse_strict_double(tok[static_cast<std::size_t>(i)]);
    return {GwsParams::from_doubles(v[0], v[1], v[2]), true};
  }
  return {GwsParams::from_strings(tok[0], tok[1], tok[2]), false};
}

// ---------------------------------------------------------------------------
// JSON builders
// ---------------------------------------------------------------------------

inline Json json_point(const MetricPoint& x) { return Json::array({x.x1, x.x2, x.x3}); }

inline Json json_params(const GwsParams& p) {
  Json j;
  j["a"] = {to_string(p.a(0)), to_string(p.a(1)), to_string(p.a(2))};
  j["a_decimal"] = {p.a_d(0), p.a_d(1), p.a_d(2)};
  j["exact"] = p.exact();
  j["theta"] = to_string(p.theta());
  j["theta_decimal"] = p.theta_d();
  j["theta_sign"] = p.theta_sign();
  j["omega"] = to_string(p.omega());
  j["omega_decimal"] = p.omega_d();
  j["m"] = {p.m(0), p.m(1), p.m(2)};
  j["M"] = {p.M(0), p.M(1), p.M(2)};
  j["theta_cap"] = {p.theta_cap(0), p.theta_cap(1), p.theta_cap(2)};
  j["theta_vs_cap"] = {p.theta_vs_cap(0), p.theta_vs_cap(1), p.theta_vs_cap(2)};
  return j;
}

inline Json json_verdict(const Verdict& v) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  j["sum_sign"] = v.sum_sign;
  j["cap_sign"] = v.cap_sign;
  Json idx = Json::array();
  for (int i : v.exit_indices) idx.push_back(i + 1);
  j["exit_indices"] = std::move(idx);
  j["exact"] = v.exact;
  j["inexact_tie"] = v.inexact_tie;
  return j;
}

inline Json json_root(const HRoot& r) {
  Json j;
  j["t"] = r.t;
  j["multiplicity"] = r.multiplicity;
  j["branch"] = to_string(r.branch);
  return j;
}

inline Json json_roots(const SignPoly& sp) {
  Json j;
  j["i"] = sp.i + 1;
  j["c0"] = to_string(sp.c0);
  j["c1"] = to_string(sp.c1);
  j["c2"] = to_string(sp.c2);
  j["c0_decimal"] = to_double(sp.c0);
  j["c1_decimal"] = to_double(sp.c1);
  j["c2_decimal"] = to_double(sp.c2);
  Json roots = Json::array();
  for (const HRoot& r : sp.roots) roots.push_back(json_root(r));
  j["roots"] = std::move(roots);
  return j;
}

inline Json json_scenario(const CrossingScenario& cs) {
  Json j;
  j["i"] = cs.i + 1;
  j["branch"] = to_string(cs.branch);
  j["kind"] = to_string(cs.kind);
  j["t_corner"] = cs.t_corner;
  Json roots = Json::array();
  for (const HRoot& r : cs.roots) roots.push_back(json_root(r));
  j["roots"] = std::move(roots);
  Json segs = Json::array();
  for (const FlowSegment& s : cs.segments) {
    Json seg;
    seg["t_lo"] = s.t_lo;
    if (std::isfinite(s.t_hi))
      seg["t_hi"] = s.t_hi;
    else
      seg["t_hi"] = nullptr;  // unbounded end of the high branch
    seg["inward"] = s.inward;
    segs.push_back(std::move(seg));
  }
  j["segments"] = std::move(segs);
  return j;
}

/// Full classification report: parameters, caps with the exact inequality
/// results, verdict, per-curve sign polynomial roots, and the crossing
/// scenario of every trimmed branch.
inline Json json_classify_report(const GwsParams& p) {
  Json j;
  j["params"] = json_params(p);
  j["verdict"] = json_verdict(verdict(p));
  Json faces = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json f;
    f["i"] = i + 1;
    f["theta_cap"] = p.theta_cap(i);
    f["theta_vs_cap"] = p.theta_vs_cap(i);
    f["condition_met"] = rational_condition(p, i);
    const TMarkers tm = t_markers(p, i);
    f["t_low"] = tm.t_low;
    f["t_high"] = tm.t_high;
    f["sign_poly"] = json_roots(roots_h(p, i));
    f["scenario_low"] = json_scenario(crossing_scenario(p, i, Branch::Low));
    f["scenario_high"] = json_scenario(crossing_scenario(p, i, Branch::High));
    faces.push_back(std::move(f));
  }
  j["faces"] = std::move(faces);
  return j;
}

inline Json json_event(const FlowEvent& e) {
  Json j;
  j["t"] = e.t;
  j["i"] = e.i + 1;
  j["kind"] = to_string(e.kind);
  j["x"] = json_point(e.x);
  j["lambda"] = e.lambda_value;
  return j;
}

/// Trajectory dump.  Samples are emitted as rows under a "columns" legend to
/// keep the file compact; events carry full point data.
inline Json json_trajectory(const Trajectory& traj, bool include_samples = true) {
  Json j;
  j["params"] = json_params(traj.params);
  Json opt;
  opt["rtol"] = traj.options.rtol;
  opt["atol"] = traj.options.atol;
  opt["max_step"] = traj.options.max_step;
  opt["box_lo"] = traj.options.box_lo;
  opt["box_hi"] = traj.options.box_hi;
  opt["event_time_tol"] = traj.options.event_time_tol;
  opt["touch_threshold"] = traj.options.touch_threshold;
  opt["vol_step_tol"] = traj.options.vol_step_tol;
  j["options"] = std::move(opt);
  j["terminal"] = to_string(traj.terminal);
  j["volume_drift_max"] = traj.volume_drift_max;
  j["steps_accepted"] = traj.steps_accepted;
  j["steps_rejected"] = traj.steps_rejected;
  Json events = Json::array();
  for (const FlowEvent& e : traj.events) events.push_back(json_event(e));
  j["events"] = std::move(events);
  if (include_samples) {
    j["columns"] = {"t", "x1", "x2", "x3", "lambda1", "lambda2", "lambda3", "inR"};
    Json rows = Json::array();
    for (const TrajectorySample& s : traj.samples)
      rows.push_back(Json::array({s.t, s.x.x1, s.x.x2, s.x.x3, s.lambda[0], s.lambda[1],
                                  s.lambda[2], s.inR ? 1 : 0}));
    j["samples"] = std::move(rows);
  }
  return j;
}

/// Catalog dump: one entry per family with the verbatim labels, normalized
/// spelling, parameter kind, and the formula columns as strings.
inline Json json_catalog() {
  Json rows = Json::array();
  for (const FamilySpec& f : family_table()) {
    Json j;
    j["id"] = f.id;
    j["g"] = f.g;
    j["h"] = f.h;
    j["h_normalized"] = normalized_h(f);
    switch (f.params) {
      case FamilyParams::KLM: j["params"] = "k,l,m"; break;
      case FamilyParams::L: j["params"] = "l"; break;
      case FamilyParams::None: j["params"] = "none"; break;
    }
    j["constraint"] = f.constraint;
    j["a"] = {f.a_formula[0], f.a_formula[1], f.a_formula[2]};
    j["theta"] = f.theta_formula;
    rows.push_back(std::move(j));
  }
  Json j;
  j["families"] = std::move(rows);
  return j;
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

/// Trajectory CSV: metadata, events as comment lines, then the sample rows
/// t, x1..x3, lambda1..lambda3, inR.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const MetaList& meta) {
  CsvWriter w(os);
  for (const auto& [k, v] : meta) w.metadata(k, v);
  w.metadata("terminal", to_string(traj.terminal));
  w.metadata("volume_drift_max", g17(traj.volume_drift_max));
  w.metadata("steps_accepted", std::to_string(traj.steps_accepted));
  w.metadata("steps_rejected", std::to_string(traj.steps_rejected));
  for (const FlowEvent& e : traj.events)
    w.comment("event: t=" + g17(e.t) + " i=" + std::to_string(e.i + 1) + " kind=" +
              to_string(e.kind) + " lambda=" + g17(e.lambda_value));
  w.header({"t", "x1", "x2", "x3", "lambda1", "lambda2", "lambda3", "inR"});
  for (const TrajectorySample& s : traj.samples)
    w.row({g17(s.t), g17(s.x.x1), g17(s.x.x2), g17(s.x.x3), g17(s.lambda[0]), g17(s.lambda[1]),
           g17(s.lambda[2]), s.inR ? "1" : "0"});
}

/// Boundary-branch CSV: curve parameter, point coordinates, field-normal
/// product, and crossing angle per sample.
inline void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& samples,
                            const MetaList& meta) {
  CsvWriter w(os);
  for (const auto& [k, v] : meta) w.metadata(k, v);
  w.header({"t", "x1", "x2", "x3", "product", "alpha_deg"});
  for (const CurveSample& s : samples)
    w.row({g17(s.t), g17(s.x.x1), g17(s.x.x2), g17(s.x.x3), g17(s.product), g17(s.alpha_deg)});
}

}  // namespace gws
