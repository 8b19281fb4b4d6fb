#pragma once

// Experiment suites. Each suite maps a sample index to a few checks; sample i
// draws from Rng::stream(seed, i), so any record can be reproduced from the
// seed and its index. Checks carry a signed slack (>= 0 means margin) and a
// pass flag computed against the suite tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mhm/axioms.hpp"
#include "mhm/delta.hpp"
#include "mhm/harness/parallel.hpp"
#include "mhm/harness/report.hpp"
#include "mhm/harness/sampling.hpp"
#include "mhm/harness/structure_spec.hpp"
#include "mhm/strip.hpp"

namespace mhm {

struct ExperimentConfig {
  std::string structure = "canonical";
  std::string suite;
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.5;
  double epsilon = 1.0 / 32.0;
  std::optional<double> tol;  // overrides the suite's default tolerance
  int budget = DeltaBudget{}.evaluations;
  double chart_omega = std::numbers::pi;  // chart used for coordinates in records
  std::int64_t record_limit = 100;        // first samples always recorded
  std::int64_t failure_limit = 1000;      // failing samples recorded beyond those
  std::optional<unsigned> threads;        // defaults to MHM_THREADS / hardware
};

enum class Reduce { min, max, sum };

struct Stat {
  std::string name;
  double value = 0.0;
  Reduce how = Reduce::min;
};

struct Check {
  std::string name;
  double slack = 0.0;
  bool pass = true;
  Json inputs;  // only filled on detailed runs
  Json values;
};

struct Outcome {
  std::deque<Check> checks;  // stable references across add()
  std::vector<Stat> stats;

  Check& add(std::string name, double slack, bool pass) {
    checks.push_back({std::move(name), slack, pass, {}, {}});
    return checks.back();
  }
  /// Slack against a lower threshold: pass iff slack >= -tol.
  Check& add_slack(std::string name, double slack, double tol) {
    return add(std::move(name), slack, slack >= -tol);
  }
  /// Error against a tolerance: slack = -error, pass iff error <= tol.
  Check& add_error(std::string name, double error, double tol) {
    return add(std::move(name), -error, error <= tol);
  }
  void stat(std::string name, double value, Reduce how) { stats.push_back({std::move(name), value, how}); }
};

struct SuiteContext {
  const MoebiusStructure& m;
  const ExperimentConfig& cfg;
  double tol;
  CirclePoint omega;
};

using SuiteFn = Outcome (*)(const SuiteContext&, std::int64_t, Rng&, bool);
using FinalizeFn = void (*)(const SuiteContext&, Json&);

struct SuiteDef {
  const char* name;
  const char* about;
  double default_tol;
  SuiteFn run;
  FinalizeFn finalize = nullptr;
};

namespace suites {

inline Json tetrad_json(const Tetrad& t, CirclePoint omega) {
  return Json{{"x", point_json(t.x, omega)}, {"y", point_json(t.y, omega)},
              {"z", point_json(t.z, omega)}, {"u", point_json(t.u, omega)}};
}

inline Json harmonic_json(const HarmonicPair& q, CirclePoint omega) {
  return Json{{"left", pair_json(q.left, omega)}, {"right", pair_json(q.right, omega)}};
}

inline std::array<double, 4> distinct_angles(Rng& rng, double min_sep = kMinSeparation) {
  for (;;) {
    std::array<double, 4> t{rng.angle(), rng.angle(), rng.angle(), rng.angle()};
    bool ok = true;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) ok = ok && angular_distance(CirclePoint(t[i]), CirclePoint(t[j])) >= min_sep;
    if (ok) return t;
  }
}

inline Outcome axioms(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const Tetrad t = sample_separating(rng);
  const auto g = distinct_angles(rng);
  const Tetrad general{CirclePoint(g[0]), CirclePoint(g[1]), CirclePoint(g[2]), CirclePoint(g[3])};
  const auto cr = cross_ratio(ctx.m, t);
  const MAlphaSlack ms = check_m_alpha(ctx.m, t, ctx.cfg.alpha);
  const double p_sep = cr.r1 + cr.r2 - 1.0;
  const double p_gen = check_ptolemy(ctx.m, general);
  auto& c1 = out.add_slack("m-alpha", std::min(ms.slack1, ms.slack2), ctx.tol);
  auto& c2 = out.add_slack("ptolemy", std::min(p_sep, p_gen), ctx.tol);
  out.stat("min_m_alpha_slack", std::min(ms.slack1, ms.slack2), Reduce::min);
  out.stat("alpha_estimate", std::min((1.0 - cr.r1) / cr.r2, (1.0 - cr.r2) / cr.r1), Reduce::min);
  out.stat("max_abs_ptolemy_separating", std::abs(p_sep), Reduce::max);
  out.stat("min_ptolemy_general", p_gen, Reduce::min);
  if (detailed) {
    c1.inputs = Json{{"tetrad", tetrad_json(t, ctx.omega)}, {"alpha", ctx.cfg.alpha}};
    c1.values = Json{{"r1", cr.r1}, {"r2", cr.r2}, {"slack1", ms.slack1}, {"slack2", ms.slack2}};
    c2.inputs = Json{{"separating", tetrad_json(t, ctx.omega)}, {"general", tetrad_json(general, ctx.omega)}};
    c2.values = Json{{"separating_slack", p_sep}, {"general_slack", number(p_gen)}};
  }
  return out;
}

inline void axioms_finalize(const SuiteContext&, Json& extra) {
  if (extra.contains("alpha_estimate") && extra["alpha_estimate"].is_number()) {
    extra["alpha_estimate"] = std::clamp(extra["alpha_estimate"].get<double>(), 0.0, 1.0);
  }
}

inline Outcome cross_ratio_invariance(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  CirclePoint omega;
  std::array<double, 4> g{};
  for (;;) {
    g = distinct_angles(rng);
    omega = CirclePoint(rng.angle());
    bool ok = true;
    for (double a : g) ok = ok && angular_distance(CirclePoint(a), omega) >= kMinSeparation;
    if (ok) break;
  }
  const Tetrad t{CirclePoint(g[0]), CirclePoint(g[1]), CirclePoint(g[2]), CirclePoint(g[3])};
  const auto base = cross_ratio(ctx.m, t);
  const auto chart = cross_ratio(ChartMetric(ctx.m, omega), t);
  const double err = std::max(std::abs(base.r1 - chart.r1) / base.r1, std::abs(base.r2 - chart.r2) / base.r2);
  auto& c = out.add_error("chart-invariance", err, ctx.tol);
  out.stat("max_relative_error", err, Reduce::max);
  if (detailed) {
    c.inputs = Json{{"tetrad", tetrad_json(t, ctx.omega)}, {"omega", point_json(omega, ctx.omega)}};
    c.values = Json{{"r1", base.r1}, {"r2", base.r2}, {"r1_chart", chart.r1}, {"r2_chart", chart.r2}};
  }
  return out;
}

inline Outcome self_contracted(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const Tetrad s = sample_separating(rng);  // angles x < z < y < u
  const CirclePoint x = s.x, z = s.z, y = s.y, u = s.u;
  const ChartMetric chart(ctx.m, u);
  const double dxy = chart.distance(x, y), dxz = chart.distance(x, z);
  auto& c = out.add_slack("nested-interval", (dxy - dxz) / dxy, ctx.tol);
  if (detailed) {
    c.inputs = Json{{"x", point_json(x, ctx.omega)}, {"z", point_json(z, ctx.omega)},
                    {"y", point_json(y, ctx.omega)}, {"u", point_json(u, ctx.omega)}};
    c.values = Json{{"xz_u", dxz}, {"xy_u", dxy}};
  }
  return out;
}

inline Outcome harmonic_separation(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const HarmonicPair q = sample_harmonic(ctx.m, rng);
  const double defect = harmonic_defect(ctx.m, q.left, q.right);
  const bool sep = separates(q.left, q.right);
  auto& c1 = out.add_error("harmonic", defect, ctx.tol);
  auto& c2 = out.add("separates", sep ? 0.0 : -1.0, sep);
  if (detailed) {
    c1.inputs = c2.inputs = Json{{"pair", harmonic_json(q, ctx.omega)}};
    c1.values = Json{{"defect", defect}};
    c2.values = Json{{"separates", sep}};
  }
  return out;
}

inline Outcome triangle(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const auto g = distinct_angles(rng);
  const CirclePoint omega(g[0]), x(g[1]), y(g[2]), z(g[3]);
  const ChartMetric chart(ctx.m, omega);
  const double xy = chart.distance(x, y), xz = chart.distance(x, z), zy = chart.distance(z, y);
  auto& c = out.add_slack("chart-triangle", (xz + zy - xy) / xy, ctx.tol);
  if (detailed) {
    c.inputs = Json{{"omega", point_json(omega, ctx.omega)}, {"x", point_json(x, ctx.omega)},
                    {"y", point_json(y, ctx.omega)}, {"z", point_json(z, ctx.omega)}};
    c.values = Json{{"xy", xy}, {"xz", xz}, {"zy", zy}};
  }
  return out;
}

inline Outcome continuity(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  constexpr double eta = 1e-9;
  CirclePoint x, y;
  do {
    x = CirclePoint(rng.angle());
    y = CirclePoint(rng.angle());
  } while (angular_distance(x, y) < kMinSeparation);
  const CirclePoint x2(x.theta() + eta * rng.sign());
  const double jump = std::abs(ctx.m.distance(x2, y) - ctx.m.distance(x, y));
  auto& c = out.add_error("modulus", jump, ctx.tol);
  out.stat("max_jump", jump, Reduce::max);
  if (detailed) {
    c.inputs = Json{{"x", point_json(x, ctx.omega)}, {"x_moved", point_json(x2, ctx.omega)}, {"y", point_json(y, ctx.omega)}};
    c.values = Json{{"jump", jump}, {"step", eta}};
  }
  return out;
}

inline Outcome rho_involution(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const auto g = distinct_angles(rng);
  const PointPair a{CirclePoint(g[0]), CirclePoint(g[1])};
  const CirclePoint x(g[2]);
  const CirclePoint y = rho(ctx.m, a, x);
  const CirclePoint back = rho(ctx.m, a, y);
  const double err = angular_distance(back, x);
  const bool fixed = rho(ctx.m, a, a.p()) == a.p() && rho(ctx.m, a, a.q()) == a.q();
  // Moving rho(x) by one ulp moves rho(rho(x)) this much: the error floor of
  // any double-precision rho on this sample.
  const CirclePoint y_next(std::nextafter(y.theta(), HUGE_VAL));
  const double floor = angular_distance(rho(ctx.m, a, y_next), back);
  auto& c1 = out.add_error("involution", err, ctx.tol);
  auto& c2 = out.add("fixed-endpoints", fixed ? 0.0 : -1.0, fixed);
  out.stat("max_involution_error", err, Reduce::max);
  out.stat("max_ulp_sensitivity", floor, Reduce::max);
  if (detailed) {
    c1.inputs = c2.inputs = Json{{"axis", pair_json(a, ctx.omega)}, {"x", point_json(x, ctx.omega)}};
    c1.values = Json{{"rho_x", point_json(y, ctx.omega)}, {"rho_rho_x", point_json(back, ctx.omega)}, {"error", err},
                     {"ulp_sensitivity", floor}};
    c2.values = Json{{"fixed", fixed}};
  }
  return out;
}

inline Outcome line_isometry(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const HarmonicPair q = sample_harmonic(ctx.m, rng);
  const Line line{q.left, q.right};
  const double t1 = rng.uniform(-5.0, 5.0), t2 = rng.uniform(-5.0, 5.0);
  const HarmonicPair q1 = line_point(ctx.m, line, t1);
  const HarmonicPair q2 = line_point(ctx.m, line, t2);
  const double d = line_distance(ctx.m, q1, q2);
  const double err = std::abs(d - std::abs(t1 - t2));
  auto& c = out.add_error("isometry", err, ctx.tol);
  out.stat("max_deviation", err, Reduce::max);
  if (detailed) {
    c.inputs = Json{{"basepoint", harmonic_json(q, ctx.omega)}, {"tau1", t1}, {"tau2", t2}};
    c.values = Json{{"distance", d}, {"deviation", err}};
  }
  return out;
}

inline Outcome perpendicular(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const auto [b, b2] = sample_strong_causal(rng);
  Json inputs;
  if (detailed) inputs = Json{{"b", pair_json(b, ctx.omega)}, {"b2", pair_json(b2, ctx.omega)}};
  try {
    const Perpendicular s = common_perpendicular(ctx.m, b, b2);
    const Perpendicular r = common_perpendicular(ctx.m, b2, b);
    const double d1 = harmonic_defect(ctx.m, s.pair(), b), d2 = harmonic_defect(ctx.m, s.pair(), b2);
    const double uniq = std::max(angular_distance(s.v, r.w), angular_distance(s.w, r.v));
    const bool oriented = arc_between(b.p(), b.q(), b2.p()).strictly_contains(s.v) &&
                          arc_between(b2.p(), b2.q(), b.p()).strictly_contains(s.w);
    auto& c1 = out.add_error("harmonic", std::max(d1, d2), ctx.tol);
    auto& c2 = out.add_error("uniqueness", uniq, 1e-8);
    auto& c3 = out.add("orientation", oriented ? 0.0 : -1.0, oriented);
    out.stat("max_defect", std::max(d1, d2), Reduce::max);
    if (detailed) {
      c1.inputs = c2.inputs = c3.inputs = inputs;
      c1.values = Json{{"v", point_json(s.v, ctx.omega)}, {"w", point_json(s.w, ctx.omega)}, {"defect_b", d1}, {"defect_b2", d2}};
      c2.values = Json{{"swapped_v", point_json(r.v, ctx.omega)}, {"swapped_w", point_json(r.w, ctx.omega)}, {"error", uniq}};
      c3.values = Json{{"oriented", oriented}};
    }
  } catch (const Error& e) {
    auto& c = out.add("converged", -1.0, false);
    if (detailed) {
      c.inputs = inputs;
      c.values = Json{{"error", e.what()}};
    }
  }
  return out;
}

inline Outcome width_bounds_suite(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const Strip p = sample_strip(ctx.m, rng);
  const WidthBounds wb = width_bounds(ctx.m, p, ctx.cfg.alpha);
  const PointPair s = p.s();
  const double projected = segment_length(ctx.m, s, PointPair(p.x, rho(ctx.m, s, p.x)), PointPair(p.u, rho(ctx.m, s, p.u)));
  const double width_err = std::abs(projected - p.width);
  const ChartMetric chart(ctx.m, p.w);
  const double sym = std::max(std::abs(chart.distance(p.v, p.y) - p.g) / p.g, std::abs(chart.distance(p.v, p.z) - p.h) / p.h);
  auto& c1 = out.add_slack("width-bounds", wb.min_slack(), ctx.tol);
  auto& c2 = out.add_error("width-consistency", width_err, 1e-8);
  auto& c3 = out.add_error("perpendicular-symmetry", sym, 1e-8);
  out.stat("min_upper_slack", wb.upper, Reduce::min);
  out.stat("min_lower_slack", wb.lower, Reduce::min);
  out.stat("min_displacement_slack", wb.displacement, Reduce::min);
  out.stat("min_ratio_slack", wb.ratio, Reduce::min);
  if (detailed) {
    c1.inputs = c2.inputs = c3.inputs =
        Json{{"x", point_json(p.x, ctx.omega)}, {"y", point_json(p.y, ctx.omega)}, {"u", point_json(p.u, ctx.omega)},
             {"z", point_json(p.z, ctx.omega)}, {"alpha", ctx.cfg.alpha}};
    c1.values = Json{{"width", p.width}, {"upper", wb.upper}, {"lower", wb.lower},
                     {"displacement", wb.displacement}, {"ratio", wb.ratio}};
    c2.values = Json{{"width", p.width}, {"projected", projected}};
    c3.values = Json{{"g", p.g}, {"h", p.h}, {"relative_error", sym}};
  }
  return out;
}

/// A strip p' = (a', b') with a', b' in U_eps(a) and s' in V_eps(s) for the
/// frame f: s' is drawn first, a' and b' are then taken on h_{s'}, so s' is
/// their common perpendicular. Step sizes shrink until the draw lands inside.
template <SemiMetric S>
std::optional<Strip> strip_near_frame(const S& m, const Frame& f, double eps, Rng& rng) {
  const FrameCharts<S> charts(m, f);
  const double cv = f.v.chart(f.x), cw = f.w.chart(f.x);
  const double cx = f.x.chart(f.w), cy = f.y.chart(f.w), cmid = f.v.chart(f.w);
  const double outward = cx > cmid ? 1.0 : -1.0;  // away from v in the chart at w
  double amp = 1.0;
  for (int attempt = 0; attempt < 60; ++attempt, amp *= 0.5) {
    try {
      const CirclePoint v2 = CirclePoint::from_chart(cv + amp * eps * std::abs(cv - cw) * rng.uniform(-1, 1), f.x);
      const CirclePoint w2 = CirclePoint::from_chart(cw + amp * eps * std::abs(cv - cw) * rng.uniform(-1, 1), f.x);
      if (charts.x_chart(f.v, v2) >= eps || charts.x_chart(f.w, w2) >= eps) continue;
      const PointPair s2(v2, w2);
      const double step = amp * eps * std::abs(cx - cy);
      const CirclePoint x2 = CirclePoint::from_chart(cx + step * rng.uniform(-0.5, 0.5), f.w);
      const CirclePoint u2 = CirclePoint::from_chart(x2.chart(f.w) + outward * step * rng.uniform(0.05, 0.5), f.w);
      if (s2.has_endpoint(x2) || s2.has_endpoint(u2)) continue;
      const PointPair a2(x2, rho(m, s2, x2)), b2(u2, rho(m, s2, u2));
      const CirclePoint y2 = a2.other(x2), z2 = b2.other(u2);
      if (charts.w_chart(f.x, x2) >= eps || charts.w_chart(f.y, y2) >= eps || charts.w_chart(f.x, u2) >= eps ||
          charts.w_chart(f.y, z2) >= eps) {
        continue;
      }
      return make_strip(m, a2, b2);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

inline Outcome ratio_distortion_suite(const SuiteContext& ctx, std::int64_t index, Rng& rng, bool detailed) {
  Outcome out;
  const double alpha = ctx.cfg.alpha;
  const double eps = index % 2 == 0 ? 1e-2 : 1e-3;
  const HarmonicPair q = sample_harmonic(ctx.m, rng);
  const Frame f = frames_of(q)[static_cast<std::size_t>(rng.uniform() * 8.0) % 8];
  const auto p = strip_near_frame(ctx.m, f, eps, rng);
  if (!p) {
    auto& c = out.add("near-strip", -1.0, false);
    if (detailed) c.inputs = Json{{"pair", harmonic_json(q, ctx.omega)}, {"epsilon", eps}};
  } else {
    const DistortionReport r = ratio_distortion(ctx.m, *p, f.w, alpha);
    auto& c1 = out.add_slack("beta", r.beta - (1.0 - 8.0 * eps), ctx.tol);
    auto& c2 = out.add("ratio-bounds", std::min(r.ratio - alpha * r.beta, 1.0 / (alpha * r.beta) - r.ratio), r.bounds_ok);
    out.stat("min_beta_margin", r.beta - (1.0 - 8.0 * eps), Reduce::min);
    if (detailed) {
      c1.inputs = c2.inputs = Json{{"frame", Json{{"x", point_json(f.x, ctx.omega)}, {"y", point_json(f.y, ctx.omega)},
                                                  {"v", point_json(f.v, ctx.omega)}, {"w", point_json(f.w, ctx.omega)}}},
                                   {"strip", Json{{"x", point_json(p->x, ctx.omega)}, {"y", point_json(p->y, ctx.omega)},
                                                  {"u", point_json(p->u, ctx.omega)}, {"z", point_json(p->z, ctx.omega)}}},
                                   {"epsilon", eps}};
      c1.values = c2.values = Json{{"gamma", r.gamma}, {"beta", r.beta}, {"ratio", r.ratio}};
    }
  }
  // Unconstrained strip, w anywhere on the arc of b' that contains w'.
  const Strip g = sample_strip(ctx.m, rng);
  const Arc far_side = arc_between(g.u, g.z, g.x);
  const double margin = std::min(kMinSeparation, 0.25 * far_side.length());
  const CirclePoint w = far_side.at(rng.uniform(margin, far_side.length() - margin));
  const DistortionReport r = ratio_distortion(ctx.m, g, w, alpha);
  auto& c = out.add("ratio-bounds-general", std::min(r.ratio - alpha * r.beta, 1.0 / (alpha * r.beta) - r.ratio), r.bounds_ok);
  if (detailed) {
    c.inputs = Json{{"x", point_json(g.x, ctx.omega)}, {"y", point_json(g.y, ctx.omega)}, {"u", point_json(g.u, ctx.omega)},
                    {"z", point_json(g.z, ctx.omega)}, {"w", point_json(w, ctx.omega)}};
    c.values = Json{{"gamma", r.gamma}, {"beta", r.beta}, {"ratio", r.ratio}};
  }
  return out;
}

inline constexpr std::array<double, 3> kShiftOffsets{1e-2, 1e-3, 1e-4};
// Lengths go like sqrt(offset): about 0.1 between the extreme offsets.
inline constexpr double kShiftShrink = 0.2;

inline Outcome parabolic_shift_suite(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const HarmonicPair h = sample_harmonic(ctx.m, rng);
  const HarmonicPair q = rng.uniform() < 0.5 ? h : h.swapped();
  const CirclePoint w = rng.uniform() < 0.5 ? q.right.p() : q.right.q();
  const CirclePoint v = q.right.other(w);
  const double cx = q.left.p().chart(w), cy = q.left.q().chart(w), cv = v.chart(w);
  const double far = std::abs(cx - cv) > std::abs(cy - cv) ? cx : cy;
  const double dir = far > cv ? 1.0 : -1.0;
  const HarmonicPair start{q.left, PointPair(v, w)};
  Json inputs;
  if (detailed) inputs = Json{{"pair", harmonic_json(start, ctx.omega)}, {"w", point_json(w, ctx.omega)}};
  std::vector<double> lengths;
  for (double e : kShiftOffsets) {
    const CirclePoint target = CirclePoint::from_chart(cv + dir * e * 0.5 * std::abs(cx - cy), w);
    const std::string tag = "offset=" + decimal(e);
    try {
      const ShiftResult r = parabolic_shift(ctx.m, start, w, target);
      const bool valid = validate_path(ctx.m, r.path).valid && r.path.sides() <= 3;
      const double len = path_length(ctx.m, r.path);
      lengths.push_back(len);
      auto& c1 = out.add("valid " + tag, valid ? 0.0 : -1.0, valid);
      auto& c2 = out.add_error("endpoint " + tag, r.endpoint_error, ctx.tol);
      out.stat("max_endpoint_error", r.endpoint_error, Reduce::max);
      if (detailed) {
        c1.inputs = c2.inputs = inputs;
        c1.inputs["target"] = c2.inputs["target"] = point_json(target, ctx.omega);
        c1.values = Json{{"sides", r.path.sides()}, {"length", len}, {"tau", r.tau}, {"t", r.t}};
        c2.values = Json{{"endpoint_error", r.endpoint_error}};
      }
    } catch (const Error& err) {
      auto& c = out.add("converged " + tag, -1.0, false);
      if (detailed) {
        c.inputs = inputs;
        c.values = Json{{"error", err.what()}};
      }
    }
  }
  if (lengths.size() == kShiftOffsets.size()) {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < lengths.size(); ++i) margin = std::min(margin, lengths[i - 1] - lengths[i]);
    const double shrink = lengths.back() / lengths.front();
    auto& c = out.add("decreasing", margin, margin > 0.0);
    auto& c2 = out.add("vanishing", kShiftShrink - shrink, shrink <= kShiftShrink);
    out.stat("max_length_smallest_offset", lengths.back(), Reduce::max);
    out.stat("max_length_ratio", shrink, Reduce::max);
    if (detailed) {
      c.inputs = c2.inputs = inputs;
      c.values = c2.values = Json{{"lengths", lengths}};
    }
  }
  return out;
}

inline Outcome path_containment(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const CertificateParams cp{ctx.cfg.alpha, ctx.cfg.epsilon};
  const double t = cp.t_eps(), c = cp.c(), eps = cp.epsilon;
  const HarmonicPair q = sample_harmonic(ctx.m, rng);
  const double size = std::pow(10.0, rng.uniform(-8.0, -6.0));
  const HarmonicPair q2 = perturb_harmonic(ctx.m, q, size, rng);
  const DeltaEstimate est = delta_upper_path(ctx.m, q, q2, DeltaBudget{ctx.cfg.budget});
  const ZZPath& path = est.path;
  double contain = std::numeric_limits<double>::infinity();
  double side_bound = std::numeric_limits<double>::infinity();
  std::int64_t vertices = 0;
  for (const Frame& f0 : frames_of(q)) {
    const FrameCharts charts(ctx.m, f0);
    Frame cur = f0;
    double walked = 0.0;
    for (std::size_t k = 0; k < path.sides(); ++k) {
      const double len = side_length(ctx.m, path, k);
      if (walked + len >= t) break;
      walked += len;
      const PointPair& axis = path.axes[k];
      const HarmonicPair& next = path.vertices[k + 1];
      const auto moved = other_axis(next, axis, Tolerance{1e-9});
      if (!moved) break;
      Frame nf = cur;
      double moved_by = 0.0;
      if (same_pair(axis, PointPair(cur.v, cur.w), Tolerance{1e-9})) {
        const bool keep = charts.w_chart(cur.x, moved->p()) <= charts.w_chart(cur.x, moved->q());
        nf.x = keep ? moved->p() : moved->q();
        nf.y = moved->other(nf.x);
        moved_by = std::max(charts.w_chart(cur.x, nf.x), charts.w_chart(cur.y, nf.y));
      } else {
        const bool keep = charts.x_chart(cur.v, moved->p()) <= charts.x_chart(cur.v, moved->q());
        nf.v = keep ? moved->p() : moved->q();
        nf.w = moved->other(nf.v);
        moved_by = std::max(charts.x_chart(cur.v, nf.v), charts.x_chart(cur.w, nf.w));
      }
      cur = nf;
      ++vertices;
      const double disp = std::max({charts.w_chart(f0.x, cur.x), charts.w_chart(f0.y, cur.y),
                                    charts.x_chart(f0.v, cur.v), charts.x_chart(f0.w, cur.w)});
      contain = std::min(contain, eps - disp);
      side_bound = std::min(side_bound, len - c * moved_by);
    }
  }
  auto& c1 = out.add("vertex-containment", contain, contain > 0.0);
  auto& c2 = out.add_slack("side-length-bound", side_bound, ctx.tol);
  out.stat("vertices_checked", static_cast<double>(vertices), Reduce::sum);
  if (detailed) {
    c1.inputs = c2.inputs = Json{{"q", harmonic_json(q, ctx.omega)}, {"q2", harmonic_json(q2, ctx.omega)},
                                 {"epsilon", eps}, {"alpha", ctx.cfg.alpha}};
    c1.values = c2.values = Json{{"path_length", est.length}, {"sides", path.sides()}, {"t_eps", t}};
  }
  return out;
}

inline Outcome delta_nondegeneracy(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const CertificateParams cp{ctx.cfg.alpha, ctx.cfg.epsilon};
  const HarmonicPair q = sample_harmonic(ctx.m, rng);
  HarmonicPair q2 = q;
  double disp = 0.0;
  while (disp < 1e-2) {
    q2 = perturb_harmonic(ctx.m, q, std::pow(10.0, rng.uniform(-2.0, 0.0)), rng);
    disp = chart_displacement(ctx.m, q, q2);
  }
  const double up = delta_upper(ctx.m, q, q2, DeltaBudget{ctx.cfg.budget});
  const double cert = delta_lower_certificate(ctx.m, q, q2, cp).value_or(0.0);
  const double self_up = delta_upper(ctx.m, q, q, DeltaBudget{ctx.cfg.budget});
  const double self_cert = delta_lower_certificate(ctx.m, q, q, cp).value_or(-1.0);
  const bool sandwich = cert > 0.0 && cert <= up;
  auto& c1 = out.add("sandwich", std::min(cert, up - cert), sandwich);
  auto& c2 = out.add("identity", 0.0 - std::max(self_up, std::abs(self_cert)), self_up == 0.0 && self_cert == 0.0);
  out.stat("min_certificate", cert, Reduce::min);
  out.stat("min_upper_over_certificate", up / cert, Reduce::min);
  if (detailed) {
    c1.inputs = c2.inputs = Json{{"q", harmonic_json(q, ctx.omega)}, {"q2", harmonic_json(q2, ctx.omega)},
                                 {"alpha", cp.alpha}, {"epsilon", cp.epsilon}};
    c1.values = Json{{"displacement", disp}, {"upper", up}, {"certificate", cert}};
    c2.values = Json{{"upper", self_up}, {"certificate", self_cert}};
  }
  return out;
}

inline std::array<double, 3> random_direction(Rng& rng) {
  std::array<double, 3> d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const double n = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
  for (double& x : d) x /= n;
  return d;
}

inline constexpr std::array<double, 4> kTopologySweep{1e-1, 1e-2, 1e-3, 1e-4};

inline Outcome delta_topology(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const CertificateParams cp{ctx.cfg.alpha, ctx.cfg.epsilon};
  const HarmonicPair q = sample_harmonic(ctx.m, rng, 0.1);
  const auto dir = random_direction(rng);
  std::vector<double> ups, certs, disps;
  try {
    for (double d : kTopologySweep) {
      const HarmonicPair q2 = shift_harmonic(ctx.m, q, d * dir[0], d * dir[1], d * dir[2]);
      ups.push_back(delta_upper(ctx.m, q, q2, DeltaBudget{ctx.cfg.budget}));
      certs.push_back(delta_lower_certificate(ctx.m, q, q2, cp).value_or(0.0));
      disps.push_back(chart_displacement(ctx.m, q, q2));
    }
  } catch (const Error& e) {
    auto& c = out.add("converged", -1.0, false);
    if (detailed) c.values = Json{{"error", e.what()}};
    return out;
  }
  double dec = std::numeric_limits<double>::infinity(), sandwich = dec, tracks = dec;
  for (std::size_t i = 0; i < ups.size(); ++i) {
    if (i > 0) dec = std::min(dec, ups[i - 1] - ups[i]);
    sandwich = std::min(sandwich, ups[i] - certs[i]);
    // cert >= min(c disp, t/2) keeps the certificate away from 0 while disp is.
    tracks = std::min(tracks, certs[i] - std::min(cp.c() * disps[i], 0.5 * cp.t_eps()));
  }
  const double shrink = ups.back() / ups.front();
  auto& c1 = out.add("upper-decreasing", dec, dec > 0.0);
  auto& c2 = out.add("upper-vanishing", 0.1 - shrink, shrink <= 0.1);
  auto& c3 = out.add("sandwich", sandwich, sandwich >= 0.0 && certs.back() > 0.0);
  auto& c4 = out.add_slack("certificate-tracks-displacement", tracks, ctx.tol);
  out.stat("max_shrink", shrink, Reduce::max);
  if (detailed) {
    c1.inputs = c2.inputs = c3.inputs = c4.inputs =
        Json{{"q", harmonic_json(q, ctx.omega)}, {"direction", dir}, {"sweep", kTopologySweep}};
    c1.values = c2.values = c3.values = c4.values =
        Json{{"upper", ups}, {"certificate", certs}, {"displacement", disps}};
  }
  return out;
}

inline constexpr int kCauchyTerms = 10;
inline constexpr double kCauchyRatio = 0.25;
// Offsets shrink 4x per term and delta like their square root, so the
// sequence halves; measured last terms stay near 5e-3 and last/first near 3e-3.
inline constexpr double kCauchyTarget = 1e-2;  // bound on delta_upper(q_10, limit)
inline constexpr double kCauchyShrink = 1e-2;  // bound on last / first
inline constexpr std::size_t kCauchyMonotoneFrom = 2;  // offset 0.5 / 16

inline Outcome completeness(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const HarmonicPair limit = sample_harmonic(ctx.m, rng, 0.1);
  const auto dir = random_direction(rng);
  std::vector<double> ups;
  try {
    double size = 0.5;
    for (int k = 0; k < kCauchyTerms; ++k, size *= kCauchyRatio) {
      const HarmonicPair qk = shift_harmonic(ctx.m, limit, size * dir[0], size * dir[1], size * dir[2]);
      ups.push_back(delta_upper(ctx.m, qk, limit, DeltaBudget{ctx.cfg.budget}));
    }
  } catch (const Error& e) {
    auto& c = out.add("converged", -1.0, false);
    if (detailed) c.values = Json{{"error", e.what()}};
    return out;
  }
  // The first terms sit at coordinate offsets of order 1, where nothing ties
  // delta to the offset monotonically; the tail must decrease.
  double dec = std::numeric_limits<double>::infinity();
  for (std::size_t i = kCauchyMonotoneFrom + 1; i < ups.size(); ++i) dec = std::min(dec, ups[i - 1] - ups[i]);
  auto& c1 = out.add("tail-decreasing", dec, dec > 0.0);
  auto& c2 = out.add("vanishing", kCauchyTarget - ups.back(), ups.back() <= kCauchyTarget);
  const double shrink = ups.back() / ups.front();
  auto& c3 = out.add("shrink", kCauchyShrink - shrink, shrink <= kCauchyShrink);
  out.stat("max_last_term", ups.back(), Reduce::max);
  out.stat("max_shrink", shrink, Reduce::max);
  if (detailed) {
    c1.inputs = c2.inputs = c3.inputs = Json{{"limit", harmonic_json(limit, ctx.omega)}, {"direction", dir},
                                             {"first_offset", 0.5}, {"ratio", kCauchyRatio}};
    c1.values = c2.values = c3.values = Json{{"upper", ups}};
  }
  return out;
}

inline Outcome delta_pseudometric(const SuiteContext& ctx, std::int64_t, Rng& rng, bool detailed) {
  Outcome out;
  const DeltaBudget budget{ctx.cfg.budget};
  const HarmonicPair q = sample_harmonic(ctx.m, rng, 0.1);
  const HarmonicPair q2 = perturb_harmonic(ctx.m, q, std::pow(10.0, rng.uniform(-3.0, -1.0)), rng);
  const HarmonicPair q3 = perturb_harmonic(ctx.m, q, std::pow(10.0, rng.uniform(-3.0, -1.0)), rng);
  const double d12 = delta_upper(ctx.m, q, q2, budget), d21 = delta_upper(ctx.m, q2, q, budget);
  const double d23 = delta_upper(ctx.m, q2, q3, budget), d13 = delta_upper(ctx.m, q, q3, budget);
  const double d11 = delta_upper(ctx.m, q, q, budget);
  auto& c1 = out.add("zero-on-diagonal", 0.0 - d11, d11 == 0.0 && d12 >= 0.0);
  auto& c2 = out.add_error("symmetry", std::abs(d12 - d21), 1e-12);
  auto& c3 = out.add_slack("triangle", d12 + d23 - d13, ctx.tol);
  out.stat("min_triangle_slack", d12 + d23 - d13, Reduce::min);
  if (detailed) {
    c1.inputs = c2.inputs = c3.inputs = Json{{"q", harmonic_json(q, ctx.omega)}, {"q2", harmonic_json(q2, ctx.omega)},
                                             {"q3", harmonic_json(q3, ctx.omega)}};
    c1.values = c2.values = c3.values = Json{{"d12", d12}, {"d21", d21}, {"d23", d23}, {"d13", d13}};
  }
  return out;
}

}  // namespace suites

inline const std::vector<SuiteDef>& suite_registry() {
  static const std::vector<SuiteDef> defs{
      {"axioms", "Ptolemy and M(alpha) slacks on sampled tetrads; alpha estimate", 1e-9, suites::axioms,
       suites::axioms_finalize},
      {"cross-ratio-invariance", "cross-ratios agree between the base metric and a chart metric", 1e-10,
       suites::cross_ratio_invariance},
      {"self-contracted", "nested intervals have monotone chart lengths", 0.0, suites::self_contracted},
      {"harmonic-separation", "harmonic pairs separate each other", 1e-9, suites::harmonic_separation},
      {"triangle", "triangle inequality of chart metrics", 1e-12, suites::triangle},
      {"continuity", "base distance moves little under tiny point moves", 1e-6, suites::continuity},
      {"rho-involution", "rho_a is an involution fixing the axis endpoints", 1e-9, suites::rho_involution},
      {"line-isometry", "line coordinates are isometric to the real line", 1e-8, suites::line_isometry},
      {"perpendicular", "common perpendiculars are harmonic, unique and oriented", 1e-9, suites::perpendicular},
      {"width-bounds", "strip width bounds hold at the configured alpha", 1e-8, suites::width_bounds_suite},
      {"ratio-distortion", "ratio distortion of strips seen from a foreign chart", 0.0,
       suites::ratio_distortion_suite},
      {"parabolic-shift", "prescribed parabolic shifts: short valid paths hitting the target", 1e-8,
       suites::parabolic_shift_suite},
      {"path-containment", "short paths stay in the eps-neighborhood and obey the side bound", 0.0,
       suites::path_containment},
      {"delta-nondegeneracy", "0 < certificate <= upper bound for distinct pairs", 0.0, suites::delta_nondegeneracy},
      {"delta-topology", "delta bounds follow coordinate displacement to 0", 0.0, suites::delta_topology},
      {"completeness", "delta to the limit of a converging sequence tends to 0", 0.0, suites::completeness},
      {"delta-pseudometric", "symmetry and triangle inequality of the delta upper bound", 1e-6,
       suites::delta_pseudometric},
  };
  return defs;
}

inline const SuiteDef& find_suite(const std::string& name) {
  for (const auto& d : suite_registry())
    if (name == d.name) return d;
  std::string known;
  for (const auto& d : suite_registry()) known += (known.empty() ? "" : ", ") + std::string(d.name);
  throw Error(Errc::config, "unknown suite '" + name + "' (known: " + known + ")");
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.samples < 1) throw Error(Errc::config, "samples must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error(Errc::config, "alpha must lie in (0, 1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0 / 16.0)) throw Error(Errc::config, "epsilon must lie in (0, 1/16]");
  if (cfg.tol && !(*cfg.tol >= 0.0)) throw Error(Errc::config, "tolerance must be >= 0");
  if (cfg.budget < 0) throw Error(Errc::config, "budget must be >= 0");
  if (cfg.record_limit < 0 || cfg.failure_limit < 0) throw Error(Errc::config, "record limits must be >= 0");
}

inline Json config_json(const ExperimentConfig& cfg, double tol) {
  return Json{{"structure", cfg.structure}, {"suite", cfg.suite},   {"samples", cfg.samples},
              {"seed", cfg.seed},           {"alpha", cfg.alpha},   {"epsilon", cfg.epsilon},
              {"tol", tol},                 {"budget", cfg.budget}, {"chart_omega", cfg.chart_omega}};
}

namespace detail {

inline void reduce_stat(Json& extra, const Stat& s) {
  if (!extra.contains(s.name)) {
    extra[s.name] = number(s.value);
    return;
  }
  const Json& cur = extra[s.name];
  const double old = cur.is_number() ? cur.get<double>() : (cur == "inf" ? HUGE_VAL : cur == "-inf" ? -HUGE_VAL : NAN);
  double v = s.value;
  switch (s.how) {
    case Reduce::min: v = std::min(old, v); break;
    case Reduce::max: v = std::max(old, v); break;
    case Reduce::sum: v = old + v; break;
  }
  extra[s.name] = number(v);
}

}  // namespace detail

/// Runs one suite against an already constructed structure.
inline Report run_suite(const MoebiusStructure& m, const ExperimentConfig& cfg) {
  validate(cfg);
  const SuiteDef& def = find_suite(cfg.suite);
  const double tol = cfg.tol.value_or(def.default_tol);
  const SuiteContext ctx{m, cfg, tol, CirclePoint(cfg.chart_omega)};
  const auto sample = [&](std::int64_t i, bool detailed) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
    return def.run(ctx, i, rng, detailed);
  };
  const auto outcomes =
      parallel_map<Outcome>(cfg.samples, [&](std::int64_t i) { return sample(i, false); }, cfg.threads.value_or(thread_count()));

  Report rep;
  rep.config = config_json(cfg, tol);
  std::vector<std::int64_t> keep;
  std::int64_t failures_kept = 0;
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    bool failed = false;
    for (const Check& c : outcomes[i].checks) {
      ++rep.summary.checks;
      if (!c.pass) {
        ++rep.summary.violations;
        failed = true;
      }
      rep.summary.min_slack = std::min(rep.summary.min_slack, c.slack);
    }
    for (const Stat& s : outcomes[i].stats) detail::reduce_stat(rep.summary.extra, s);
    if (i < cfg.record_limit) {
      keep.push_back(i);
    } else if (failed && failures_kept < cfg.failure_limit) {
      keep.push_back(i);
      ++failures_kept;
    }
  }
  if (def.finalize) def.finalize(ctx, rep.summary.extra);
  for (std::int64_t i : keep) {
    for (Check& c : sample(i, true).checks) {
      rep.records.push_back({i, c.name, c.inputs.is_null() ? Json::object() : std::move(c.inputs),
                             c.values.is_null() ? Json::object() : std::move(c.values), c.slack, c.pass});
    }
  }
  return rep;
}

inline Report run_suite(const ExperimentConfig& cfg) {
  validate(cfg);
  find_suite(cfg.suite);
  return run_suite(make_structure(cfg.structure), cfg);
}

inline constexpr std::array<const char*, 9> kFuzzSuites{
    "axioms", "cross-ratio-invariance", "self-contracted", "harmonic-separation", "triangle",
    "rho-involution", "line-isometry", "perpendicular", "width-bounds"};

/// The quick suites in one report; check names carry the suite as a prefix
/// and the per-suite summaries land under summary.suites.
inline Report run_fuzz(const MoebiusStructure& m, ExperimentConfig cfg) {
  Report all;
  Json per_suite = Json::object();
  for (const char* name : kFuzzSuites) {
    cfg.suite = name;
    Report r = run_suite(m, cfg);
    all.summary.checks += r.summary.checks;
    all.summary.violations += r.summary.violations;
    all.summary.min_slack = std::min(all.summary.min_slack, r.summary.min_slack);
    Json s{{"checks", r.summary.checks}, {"violations", r.summary.violations},
           {"min_slack", number(r.summary.min_slack)}};
    for (const auto& [k, v] : r.summary.extra.items()) s[k] = v;
    per_suite[name] = std::move(s);
    for (auto& rec : r.records) {
      rec.check = std::string(name) + "/" + rec.check;
      all.records.push_back(std::move(rec));
    }
  }
  cfg.suite = "fuzz";
  all.config = config_json(cfg, cfg.tol.value_or(NAN));
  if (!cfg.tol) all.config["tol"] = "suite default";
  all.summary.extra["suites"] = std::move(per_suite);
  return all;
}

}  // namespace mhm
