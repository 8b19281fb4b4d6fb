#pragma once

// Combinatorics of the circle: points as normalized angles, unordered point
// pairs, open arcs, and the separation / strong causal predicates. No metric
// content lives here.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "mhm/error.hpp"

namespace mhm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular tolerance used by all combinatorial predicates.
struct Tolerance {
  double angle = 1e-12;
};

inline double normalize_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

class CirclePoint {
 public:
  constexpr CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(normalize_angle(theta)) {}

  double theta() const { return theta_; }

  // Chart coordinates: c = tan((theta - omega + pi) / 2). The chart sends omega
  // to infinity; the default chart (omega = pi) is c = tan(theta / 2).
  static CirclePoint from_chart(double c, CirclePoint omega = CirclePoint(std::numbers::pi)) {
    if (std::isinf(c)) return omega;
    return CirclePoint(omega.theta() - std::numbers::pi + 2.0 * std::atan(c));
  }

  double chart(CirclePoint omega = CirclePoint(std::numbers::pi)) const;

  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

 private:
  double theta_ = 0.0;
};

/// Counter-clockwise angle travelled from `from` to `to`, in [0, 2pi).
inline double ccw_offset(CirclePoint from, CirclePoint to) {
  return normalize_angle(to.theta() - from.theta());
}

inline double angular_distance(CirclePoint a, CirclePoint b) {
  const double d = ccw_offset(a, b);
  return std::min(d, kTwoPi - d);
}

inline bool same_point(CirclePoint a, CirclePoint b, Tolerance tol = {}) {
  return angular_distance(a, b) <= tol.angle;
}

inline double CirclePoint::chart(CirclePoint omega) const {
  const double phi = ccw_offset(omega, *this);
  if (phi == 0.0) return std::numeric_limits<double>::infinity();
  return -std::cos(0.5 * phi) / std::sin(0.5 * phi);
}

inline CirclePoint chart_point(double c) { return CirclePoint::from_chart(c); }

/// Unordered pair of distinct points, stored with p.theta() <= q.theta().
class PointPair {
 public:
  PointPair(CirclePoint a, CirclePoint b, Tolerance tol = {}) {
    if (same_point(a, b, tol)) {
      throw Error(Errc::degenerate_tuple, "point pair with coincident endpoints");
    }
    if (b.theta() < a.theta()) std::swap(a, b);
    p_ = a;
    q_ = b;
  }

  CirclePoint p() const { return p_; }
  CirclePoint q() const { return q_; }

  bool has_endpoint(CirclePoint z, Tolerance tol = {}) const {
    return same_point(z, p_, tol) || same_point(z, q_, tol);
  }

  /// The endpoint that is not `z` (z must be an endpoint).
  CirclePoint other(CirclePoint z, Tolerance tol = {}) const {
    return same_point(z, p_, tol) ? q_ : p_;
  }

  friend bool operator==(const PointPair&, const PointPair&) = default;

 private:
  CirclePoint p_;
  CirclePoint q_;
};

inline PointPair chart_pair(double c1, double c2) { return {chart_point(c1), chart_point(c2)}; }

inline bool same_pair(const PointPair& a, const PointPair& b, Tolerance tol = {}) {
  return (same_point(a.p(), b.p(), tol) && same_point(a.q(), b.q(), tol)) ||
         (same_point(a.p(), b.q(), tol) && same_point(a.q(), b.p(), tol));
}

/// Open arc travelled counter-clockwise from `from` to `to`.
struct Arc {
  CirclePoint from;
  CirclePoint to;

  double length() const { return ccw_offset(from, to); }
  PointPair endpoints() const { return {from, to}; }
  CirclePoint at(double offset) const { return CirclePoint(from.theta() + offset); }
  double offset_of(CirclePoint z) const { return ccw_offset(from, z); }

  /// Membership without the endpoint check.
  bool strictly_contains(CirclePoint z) const {
    const double o = offset_of(z);
    return o > 0.0 && o < length();
  }

  Arc complement() const { return {to, from}; }
};

inline bool arc_contains(const Arc& arc, CirclePoint z, Tolerance tol = {}) {
  if (same_point(z, arc.from, tol) || same_point(z, arc.to, tol)) {
    throw Error(Errc::boundary, "point coincides with an arc endpoint");
  }
  return arc.strictly_contains(z);
}

/// The arc with endpoints x, y that does not contain omega.
inline Arc arc_between(CirclePoint x, CirclePoint y, CirclePoint omega, Tolerance tol = {}) {
  if (same_point(x, y, tol) || same_point(x, omega, tol) || same_point(y, omega, tol)) {
    throw Error(Errc::degenerate_tuple, "arc_between needs three distinct points");
  }
  Arc arc{x, y};
  return arc.strictly_contains(omega) ? arc.complement() : arc;
}

namespace detail {

inline bool share_endpoint(const PointPair& a, const PointPair& b, Tolerance tol) {
  return a.has_endpoint(b.p(), tol) || a.has_endpoint(b.q(), tol);
}

}  // namespace detail

/// True iff the endpoints of b lie in different open arcs cut out by a.
inline bool separates(const PointPair& a, const PointPair& b, Tolerance tol = {}) {
  if (detail::share_endpoint(a, b, tol)) {
    throw Error(Errc::degenerate_tuple, "separates needs four distinct points");
  }
  const Arc inner{a.p(), a.q()};
  return inner.strictly_contains(b.p()) != inner.strictly_contains(b.q());
}

/// Four distinct endpoints, and neither pair separates the other.
inline bool strong_causal(const PointPair& a, const PointPair& b, Tolerance tol = {}) {
  if (detail::share_endpoint(a, b, tol)) return false;
  return !separates(a, b, tol);
}

}  // namespace mhm
