#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "mhm/structure.hpp"

namespace mhm {

struct Tetrad {
  CirclePoint x, y, z, u;

  std::array<CirclePoint, 4> points() const { return {x, y, z, u}; }

  /// No entry occurs three or four times.
  bool admissible(Tolerance tol = {}) const {
    const auto pts = points();
    for (int i = 0; i < 4; ++i) {
      int count = 0;
      for (int j = 0; j < 4; ++j) count += same_point(pts[i], pts[j], tol) ? 1 : 0;
      if (count >= 3) return false;
    }
    return true;
  }

  bool nondegenerate(Tolerance tol = {}) const {
    const auto pts = points();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (same_point(pts[i], pts[j], tol)) return false;
    return true;
  }
};

/// r1 = |xz||yu| / (|xy||zu|),  r2 = |xu||yz| / (|xy||zu|).
struct CrossRatioPair {
  double r1 = 0.0;
  double r2 = 0.0;
};

template <SemiMetric S>
CrossRatioPair cross_ratio(const S& m, const Tetrad& q, Tolerance tol = {}) {
  if (!q.nondegenerate(tol)) throw Error(Errc::degenerate_tuple, "cross_ratio needs a nondegenerate tetrad");
  const double den = m.distance(q.x, q.y) * m.distance(q.z, q.u);
  return {m.distance(q.x, q.z) * m.distance(q.y, q.u) / den,
          m.distance(q.x, q.u) * m.distance(q.y, q.z) / den};
}

/// An element of Harm: the left and right axes of a harmonic 4-tuple. The
/// unordered quotient Hm is handled by comparing with `same_harmonic`.
struct HarmonicPair {
  PointPair left;
  PointPair right;

  HarmonicPair swapped() const { return {right, left}; }

  /// Representative of the Hm class: the axis with the smaller first angle goes left.
  HarmonicPair normalized() const {
    const bool keep = std::pair(left.p().theta(), left.q().theta()) <=
                      std::pair(right.p().theta(), right.q().theta());
    return keep ? *this : swapped();
  }
};

inline bool same_harmonic(const HarmonicPair& a, const HarmonicPair& b, Tolerance tol = {}) {
  return (same_pair(a.left, b.left, tol) && same_pair(a.right, b.right, tol)) ||
         (same_pair(a.left, b.right, tol) && same_pair(a.right, b.left, tol));
}

/// ln(|xz||yu| / (|xu||yz|)) for a = (x, y), b = (z, u); zero iff harmonic.
template <SemiMetric S>
double log_harmonic_defect(const S& m, const PointPair& a, const PointPair& b) {
  const auto x = a.p(), y = a.q(), z = b.p(), u = b.q();
  return std::log(m.distance(x, z) * m.distance(y, u)) - std::log(m.distance(x, u) * m.distance(y, z));
}

/// |r1 - r2| / max(r1, r2); symmetric in the order within each pair.
template <SemiMetric S>
double harmonic_defect(const S& m, const PointPair& a, const PointPair& b, Tolerance tol = {}) {
  const auto cr = cross_ratio(m, Tetrad{a.p(), a.q(), b.p(), b.q()}, tol);
  return std::abs(cr.r1 - cr.r2) / std::max(cr.r1, cr.r2);
}

inline constexpr double kHarmonicTol = 1e-9;

template <SemiMetric S>
bool is_harmonic(const S& m, const PointPair& a, const PointPair& b, double harmonic_tol = kHarmonicTol,
                 Tolerance tol = {}) {
  return harmonic_defect(m, a, b, tol) <= harmonic_tol;
}

template <SemiMetric S>
bool is_harmonic(const S& m, const HarmonicPair& q, double harmonic_tol = kHarmonicTol, Tolerance tol = {}) {
  return is_harmonic(m, q.left, q.right, harmonic_tol, tol);
}

}  // namespace mhm
