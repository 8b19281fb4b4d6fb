#pragma once

// Lines h_a in Hm: the harmonic projection rho_a, arclength coordinates along a
// line, and common perpendiculars of pairs in strong causal relation. All
// searches are derivative-free bisections over arc offsets.

#include <cmath>
#include <optional>

#include "mhm/bisection.hpp"
#include "mhm/cross_ratio.hpp"

namespace mhm {

struct LineOptions {
  BisectionOptions bisection{};
  Tolerance tol{};
};

/// rho_a(x): the unique y with ((a), (x, y)) harmonic. Axis endpoints are fixed.
///
/// With a = (z, u), y runs over the arc of a not containing x. The objective
/// ln(d(z,x) d(u,y)) - ln(d(z,y) d(u,x)) goes from +inf at z to -inf at u and
/// is monotone by the self-contraction of the u-chart.
template <SemiMetric S>
CirclePoint rho(const S& m, const PointPair& a, CirclePoint x, LineOptions opt = {}) {
  if (same_point(x, a.p(), opt.tol)) return a.p();
  if (same_point(x, a.q(), opt.tol)) return a.q();
  const Arc arc = arc_between(a.p(), a.q(), x, opt.tol);
  const CirclePoint z = arc.from, u = arc.to;
  const double base = std::log(m.distance(z, x)) - std::log(m.distance(u, x));
  auto objective = [&](double s) {
    const CirclePoint y = arc.at(s);
    return base + std::log(m.distance(u, y)) - std::log(m.distance(z, y));
  };
  return arc.at(bisect_signed(objective, 0.0, arc.length(), +1, opt.bisection));
}

/// The arc (axis.p -> axis.q) that carries the coordinate endpoint of every
/// pair on the line h_axis.
inline Arc designated_arc(const PointPair& axis) { return {axis.p(), axis.q()}; }

/// Endpoint of b inside the designated arc of `axis`.
inline CirclePoint coordinate_endpoint(const PointPair& axis, const PointPair& b, Tolerance tol = {}) {
  const Arc arc = designated_arc(axis);
  if (axis.has_endpoint(b.p(), tol) || axis.has_endpoint(b.q(), tol)) {
    throw Error(Errc::degenerate_tuple, "pair shares an endpoint with the axis");
  }
  return arc.strictly_contains(b.p()) ? b.p() : b.q();
}

/// Signed arclength from b0 to b along h_axis:
/// ln(|xz| |yz0| / (|xz0| |yz|)) with axis = (x, y), z, z0 the coordinate endpoints.
/// Positive values move toward axis.q().
template <SemiMetric S>
double line_coordinate(const S& m, const PointPair& axis, const PointPair& b0, const PointPair& b,
                       Tolerance tol = {}) {
  const CirclePoint x = axis.p(), y = axis.q();
  const CirclePoint z0 = coordinate_endpoint(axis, b0, tol);
  const CirclePoint z = coordinate_endpoint(axis, b, tol);
  return std::log(m.distance(x, z) * m.distance(y, z0)) - std::log(m.distance(x, z0) * m.distance(y, z));
}

/// Length of the segment of h_axis between (axis, b) and (axis, b2).
template <SemiMetric S>
double segment_length(const S& m, const PointPair& axis, const PointPair& b, const PointPair& b2,
                      Tolerance tol = {}) {
  return std::abs(line_coordinate(m, axis, b, b2, tol));
}

/// The common axis of two harmonic pairs, if any, with the remaining pairs.
struct CommonAxis {
  PointPair axis;
  PointPair first;
  PointPair second;
};

inline std::optional<CommonAxis> common_axis(const HarmonicPair& q, const HarmonicPair& q2, Tolerance tol = {}) {
  for (const auto& [a, b] : {std::pair{q.left, q.right}, std::pair{q.right, q.left}}) {
    if (same_pair(a, q2.left, tol)) return CommonAxis{a, b, q2.right};
    if (same_pair(a, q2.right, tol)) return CommonAxis{a, b, q2.left};
  }
  return std::nullopt;
}

/// Distance between two harmonic pairs sharing an axis.
template <SemiMetric S>
double line_distance(const S& m, const HarmonicPair& q, const HarmonicPair& q2, Tolerance tol = {}) {
  if (same_harmonic(q, q2, tol)) return 0.0;
  const auto common = common_axis(q, q2, tol);
  if (!common) throw Error(Errc::no_common_axis, "harmonic pairs share no axis");
  return segment_length(m, common->axis, common->first, common->second, tol);
}

/// A line h_axis with a coordinate origin.
struct Line {
  PointPair axis;
  PointPair base;  // right axis of the basepoint (axis, base)

  HarmonicPair basepoint() const { return {axis, base}; }
};

/// The point of the line at signed coordinate tau from the basepoint.
template <SemiMetric S>
HarmonicPair line_point(const S& m, const Line& line, double tau, LineOptions opt = {}) {
  if (tau == 0.0) return line.basepoint();
  const Arc arc = designated_arc(line.axis);
  const CirclePoint x = line.axis.p(), y = line.axis.q();
  const CirclePoint z0 = coordinate_endpoint(line.axis, line.base, opt.tol);
  const double shift = std::log(m.distance(y, z0)) - std::log(m.distance(x, z0)) - tau;
  auto objective = [&](double s) {
    const CirclePoint z = arc.at(s);
    return std::log(m.distance(x, z)) - std::log(m.distance(y, z)) + shift;
  };
  const CirclePoint z = arc.at(bisect_signed(objective, 0.0, arc.length(), -1, opt.bisection));
  return {line.axis, PointPair(z, rho(m, line.axis, z, opt), opt.tol)};
}

/// Move from q along the line of one of its axes by `distance` toward `toward`,
/// an endpoint of that axis.
template <SemiMetric S>
HarmonicPair move_along(const S& m, const PointPair& axis, const PointPair& other, CirclePoint toward,
                        double distance, LineOptions opt = {}) {
  const double sign = same_point(toward, axis.q(), opt.tol) ? 1.0 : -1.0;
  return line_point(m, Line{axis, other}, sign * distance, opt);
}

/// Common perpendicular s = (v, w) of b and b2: v lies in the arc of b not
/// containing b2, w in the arc of b2 not containing b.
struct Perpendicular {
  CirclePoint v;
  CirclePoint w;

  PointPair pair() const { return {v, w}; }
};

namespace detail {

/// Outer bisection over v in the arc of b not containing b2; the inner step
/// is w = rho_b(v); the root is where ((v, w), b2) becomes harmonic. The
/// bracket runs between rho_b(c1) and rho_b(c2) for b2 = (c1, c2), where the
/// signed defect diverges with opposite signs.
template <SemiMetric S>
Perpendicular perpendicular_search(const S& m, const PointPair& b, const PointPair& b2, const Arc& inner,
                                   const LineOptions& opt) {
  const CirclePoint c1 = b2.p(), c2 = b2.q();
  const double o1 = inner.offset_of(rho(m, b, c1, opt));
  const double o2 = inner.offset_of(rho(m, b, c2, opt));
  auto defect = [&](double s) {
    const CirclePoint v = inner.at(s);
    const CirclePoint w = rho(m, b, v, opt);
    return std::log(m.distance(v, c1) * m.distance(w, c2)) - std::log(m.distance(v, c2) * m.distance(w, c1));
  };
  // Near rho_b(c1), w approaches c1 and the defect tends to +inf.
  const double lo = std::min(o1, o2), hi = std::max(o1, o2);
  const int sign_lo = o1 < o2 ? +1 : -1;
  const CirclePoint v = inner.at(bisect_signed(defect, lo, hi, sign_lo, opt.bisection));
  return {v, rho(m, b, v, opt)};
}

}  // namespace detail

/// Common perpendicular s = (v, w) of strongly causal b, b2, with v on the
/// arc of b not containing b2.
template <SemiMetric S>
Perpendicular common_perpendicular(const S& m, const PointPair& b, const PointPair& b2, LineOptions opt = {},
                                   double harmonic_tol = kHarmonicTol) {
  if (!strong_causal(b, b2, opt.tol)) {
    throw Error(Errc::not_strong_causal, "common perpendicular needs pairs in strong causal relation");
  }
  const Arc inner = arc_between(b.p(), b.q(), b2.p(), opt.tol);
  const Arc inner2 = arc_between(b2.p(), b2.q(), b.p(), opt.tol);
  // w = rho_b(v) amplifies the rounding of v by roughly 1/|inner|^2, so the
  // search runs over the longer of the two arcs.
  if (inner.length() < inner2.length()) {
    const Perpendicular r = common_perpendicular(m, b2, b, opt, harmonic_tol);
    return {r.w, r.v};
  }
  const auto ok = [&](const Perpendicular& p) {
    const PointPair s(p.v, p.w, opt.tol);
    return harmonic_defect(m, s, b, opt.tol) <= harmonic_tol && harmonic_defect(m, s, b2, opt.tol) <= harmonic_tol;
  };
  const Perpendicular r = detail::perpendicular_search(m, b, b2, inner, opt);
  if (ok(r)) return r;
  // Both arcs short: each endpoint is only well conditioned as the outer
  // variable of its own search.
  const Perpendicular mixed{r.v, detail::perpendicular_search(m, b2, b, inner2, opt).v};
  if (ok(mixed)) return mixed;
  throw Error(Errc::no_convergence, "common perpendicular search did not reach a harmonic root");
}

}  // namespace mhm
