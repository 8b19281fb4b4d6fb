#pragma once

// Rejection samplers for the combinatorial preconditions used by the suites.
// Angles are uniform; every sampler keeps its points at least `min_sep`
// radians apart so the checks stay away from degenerate tuples.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "mhm/axioms.hpp"
#include "mhm/harness/rng.hpp"
#include "mhm/neighborhood.hpp"
#include "mhm/strip.hpp"

namespace mhm {

enum class SampleKind { separating, strong_causal, harmonic, strip };

inline SampleKind parse_sample_kind(std::string_view s) {
  if (s == "separating") return SampleKind::separating;
  if (s == "strong-causal") return SampleKind::strong_causal;
  if (s == "harmonic") return SampleKind::harmonic;
  if (s == "strip") return SampleKind::strip;
  throw Error(Errc::config, "unknown sample kind '" + std::string(s) + "'");
}

inline constexpr double kMinSeparation = 1e-3;

namespace detail {

inline std::array<double, 4> sorted_angles(Rng& rng, double min_sep) {
  for (;;) {
    std::array<double, 4> t{rng.angle(), rng.angle(), rng.angle(), rng.angle()};
    std::sort(t.begin(), t.end());
    const double gap = std::min({t[1] - t[0], t[2] - t[1], t[3] - t[2], kTwoPi - (t[3] - t[0])});
    if (gap >= min_sep) return t;
  }
}

}  // namespace detail

/// (x, y), (z, u) separate each other.
inline Tetrad sample_separating(Rng& rng, double min_sep = kMinSeparation) {
  return separating_tetrad(detail::sorted_angles(rng, min_sep));
}

/// Disjoint pairs that do not separate each other.
inline std::pair<PointPair, PointPair> sample_strong_causal(Rng& rng, double min_sep = kMinSeparation) {
  const auto t = detail::sorted_angles(rng, min_sep);
  return {PointPair(CirclePoint(t[0]), CirclePoint(t[1])), PointPair(CirclePoint(t[2]), CirclePoint(t[3]))};
}

/// Samples a and x, completes with y = rho_a(x).
template <SemiMetric S>
HarmonicPair sample_harmonic(const S& m, Rng& rng, double min_sep = kMinSeparation, LineOptions opt = {}) {
  for (;;) {
    const CirclePoint p(rng.angle()), q(rng.angle()), x(rng.angle());
    if (angular_distance(p, q) < min_sep || angular_distance(x, p) < min_sep || angular_distance(x, q) < min_sep)
      continue;
    const PointPair a(p, q);
    const CirclePoint y = rho(m, a, x, opt);
    if (angular_distance(y, p) < min_sep || angular_distance(y, q) < min_sep) continue;
    return {a, PointPair(x, y)};
  }
}

template <SemiMetric S>
Strip sample_strip(const S& m, Rng& rng, double min_sep = kMinSeparation, LineOptions opt = {}) {
  for (;;) {
    const auto [a, b] = sample_strong_causal(rng, min_sep);
    try {
      return make_strip(m, a, b, opt);
    } catch (const Error&) {
      // Extremely thin configurations can defeat the perpendicular search.
    }
  }
}

/// Points of the sampled object as a tetrad: the two pairs in order, or the
/// strip labeling (x, y, u, z).
template <SemiMetric S>
Tetrad sample_tetrad(const S& m, SampleKind kind, Rng& rng, double min_sep = kMinSeparation) {
  switch (kind) {
    case SampleKind::separating:
      return sample_separating(rng, min_sep);
    case SampleKind::strong_causal: {
      const auto [a, b] = sample_strong_causal(rng, min_sep);
      return {a.p(), a.q(), b.p(), b.q()};
    }
    case SampleKind::harmonic: {
      const HarmonicPair h = sample_harmonic(m, rng, min_sep);
      return {h.left.p(), h.left.q(), h.right.p(), h.right.q()};
    }
    case SampleKind::strip: {
      const Strip s = sample_strip(m, rng, min_sep);
      return {s.x, s.y, s.u, s.z};
    }
  }
  throw Error(Errc::config, "unknown sample kind");
}

/// Max chart displacement of q2 from q, minimized over the labelings of q.
/// Zero exactly when q2 = q.
template <SemiMetric S>
double chart_displacement(const S& m, const HarmonicPair& q, const HarmonicPair& q2) {
  double best = std::numeric_limits<double>::infinity();
  for (const Frame& f : frames_of(q)) best = std::min(best, displacement(m, f, q2).max());
  return best;
}

/// Moves x, y (the endpoints of q.left) and v = q.right.p() by the given
/// offsets in the chart at w = q.right.q(), in units of the chart length of
/// q.left, and completes the right axis by rho. Throws degenerate_tuple when
/// the moved points collide.
template <SemiMetric S>
HarmonicPair shift_harmonic(const S& m, const HarmonicPair& q, double dx, double dy, double dv, LineOptions opt = {}) {
  const CirclePoint w = q.right.q();
  const PointPair& a = q.left;
  const double cx = a.p().chart(w), cy = a.q().chart(w), cv = q.right.p().chart(w);
  const double scale = std::abs(cx - cy);
  const auto back = [&](double c) { return CirclePoint::from_chart(c, w); };
  const CirclePoint x = back(cx + dx * scale), y = back(cy + dy * scale), v = back(cv + dv * scale);
  if (same_point(x, y, opt.tol) || same_point(x, v, opt.tol) || same_point(y, v, opt.tol)) {
    throw Error(Errc::degenerate_tuple, "shifted points collide");
  }
  const PointPair a2(x, y);
  const CirclePoint w2 = rho(m, a2, v, opt);
  if (a2.has_endpoint(w2, opt.tol) || same_point(v, w2, opt.tol)) {
    throw Error(Errc::degenerate_tuple, "completed pair is degenerate");
  }
  return {a2, PointPair(v, w2)};
}

/// A harmonic pair near q, with offsets uniform in [-size, size].
template <SemiMetric S>
HarmonicPair perturb_harmonic(const S& m, const HarmonicPair& q, double size, Rng& rng, LineOptions opt = {}) {
  for (;;) {
    const double dx = size * rng.uniform(-1.0, 1.0);
    const double dy = size * rng.uniform(-1.0, 1.0);
    const double dv = size * rng.uniform(-1.0, 1.0);
    try {
      return shift_harmonic(m, q, dx, dy, dv, opt);
    } catch (const Error&) {
    }
  }
}

}  // namespace mhm
