#pragma once

// Strips p = (a, b, s), their width, and the width / ratio bounds that hold
// for structures satisfying M(alpha).

#include <algorithm>
#include <cmath>

#include "mhm/lines.hpp"

namespace mhm {

/// a = (x, y), b = (u, z) in cyclic order x, y, z, u; s = (v, w) is the common
/// perpendicular with w on the arc of b not containing a. g, h are measured
/// in the w-chart given by metric inversion of the base semi-metric.
struct Strip {
  CirclePoint x, y, u, z;
  CirclePoint v, w;
  double g = 0.0;      // |vx|_w
  double h = 0.0;      // |vu|_w
  double width = 0.0;  // ln(h / g)

  PointPair a() const { return {x, y}; }
  PointPair b() const { return {u, z}; }
  PointPair s() const { return {v, w}; }
};

/// Strip from labeled points; the labeling must satisfy the strip conditions.
template <SemiMetric S>
Strip make_strip(const S& m, CirclePoint x, CirclePoint y, CirclePoint u, CirclePoint z, LineOptions opt = {}) {
  const Tetrad t{x, y, u, z};
  if (!t.nondegenerate(opt.tol)) throw Error(Errc::not_a_strip, "strip points must be distinct");
  const PointPair a(x, y), b(u, z);
  if (!strong_causal(a, b, opt.tol) || !separates(PointPair(x, z), PointPair(u, y), opt.tol)) {
    throw Error(Errc::not_a_strip, "need a, b strongly causal and (x,z), (u,y) separating");
  }
  const Perpendicular s = common_perpendicular(m, a, b, opt);
  Strip strip{x, y, u, z, s.v, s.w};
  const ChartMetric<S> chart(m, s.w, opt.tol);
  strip.g = chart.distance(s.v, x);
  strip.h = chart.distance(s.v, u);
  // h / g in cross-ratio form, free of the chart scale.
  strip.width = std::log(m.distance(s.v, u) * m.distance(x, s.w)) - std::log(m.distance(u, s.w) * m.distance(s.v, x));
  return strip;
}

/// Strip from unordered pairs; x is the endpoint of a where the arc of a that
/// contains b starts, and u the first point of b met along that arc.
template <SemiMetric S>
Strip make_strip(const S& m, const PointPair& a, const PointPair& b, LineOptions opt = {}) {
  if (!strong_causal(a, b, opt.tol)) throw Error(Errc::not_a_strip, "pairs are not in strong causal relation");
  const Arc outer = arc_between(a.p(), a.q(), b.p(), opt.tol).complement();
  const bool p_first = outer.offset_of(b.p()) < outer.offset_of(b.q());
  const CirclePoint u = p_first ? b.p() : b.q();
  const CirclePoint z = p_first ? b.q() : b.p();
  return make_strip(m, outer.from, outer.to, u, z, opt);
}

template <SemiMetric S>
bool is_narrow(const S& m, const Strip& p, Tolerance tol = {}) {
  const ChartMetric<S> chart(m, p.w, tol);
  return chart.distance(p.x, p.u) <= p.g && chart.distance(p.y, p.z) <= p.g;
}

/// Signed slacks of the width bounds; each is >= 0 when the bound holds.
struct WidthBounds {
  double upper = 0.0;         // 2 sqrt(cr) - width
  double lower = 0.0;         // 2 sinh(l/2) - alpha(1+alpha) sqrt(cr)
  double displacement = 0.0;  // (e^l - 1) / (alpha(1+alpha)) - max(|xu|_w, |yz|_w) / |xy|_w
  double ratio = 0.0;         // min(ratio - alpha, 1/alpha - ratio), ratio = |xu|_w / |yz|_w

  double min_slack() const { return std::min({upper, lower, displacement, ratio}); }
  bool holds(double tol = 0.0) const { return min_slack() >= -tol; }
};

template <SemiMetric S>
WidthBounds width_bounds(const S& m, const Strip& p, double alpha, Tolerance tol = {}) {
  const double cr = m.distance(p.x, p.u) * m.distance(p.y, p.z) / (m.distance(p.x, p.y) * m.distance(p.z, p.u));
  const double l = p.width;
  const ChartMetric<S> chart(m, p.w, tol);
  const double xu = chart.distance(p.x, p.u);
  const double yz = chart.distance(p.y, p.z);
  const double xy = chart.distance(p.x, p.y);
  const double k = alpha * (1.0 + alpha);
  const double ratio = xu / yz;
  return {2.0 * std::sqrt(cr) - l, 2.0 * std::sinh(0.5 * l) - k * std::sqrt(cr),
          std::expm1(l) / k - std::max(xu, yz) / xy, std::min(ratio - alpha, 1.0 / alpha - ratio)};
}

struct DistortionReport {
  double gamma = 1.0;  // |x'w'|_w |u'w'|_w / (|y'w'|_w |z'w'|_w)
  double beta = 1.0;   // min(gamma, 1/gamma)
  double ratio = 1.0;  // |x'u'|_w / |y'z'|_w
  bool bounds_ok = true;
};

/// Distortion of the ratio |x'u'| / |y'z'| when the strip is viewed from the
/// chart of a foreign infinitely remote point w.
template <SemiMetric S>
DistortionReport ratio_distortion(const S& m, const Strip& p, CirclePoint w, double alpha, Tolerance tol = {}) {
  DistortionReport r;
  const auto d = [&](CirclePoint a, CirclePoint b) { return m.distance(a, b); };
  if (!same_point(w, p.w, tol)) {
    const Arc far_side = arc_between(p.u, p.z, p.x, tol);
    if (same_point(w, p.u, tol) || same_point(w, p.z, tol) || !far_side.strictly_contains(w)) {
      throw Error(Errc::orientation, "w must lie on the arc of b' that contains w'");
    }
    r.gamma = d(p.x, p.w) * d(p.u, p.w) * d(p.y, w) * d(p.z, w) /
              (d(p.y, p.w) * d(p.z, p.w) * d(p.x, w) * d(p.u, w));
  }
  r.beta = std::min(r.gamma, 1.0 / r.gamma);
  const ChartMetric<S> chart(m, w, tol);
  r.ratio = chart.distance(p.x, p.u) / chart.distance(p.y, p.z);
  r.bounds_ok = alpha * r.beta <= r.ratio && r.ratio <= 1.0 / (alpha * r.beta);
  return r;
}

}  // namespace mhm
