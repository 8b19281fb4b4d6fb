#pragma once

// Falsification of the axioms M(alpha) and P by signed slacks in cross-ratio
// coordinates. Axiom T is topological and is only smoke-tested by the harness.

#include <algorithm>
#include <cstdint>
#include <limits>

#include "mhm/cross_ratio.hpp"
#include "mhm/harness/rng.hpp"

namespace mhm {

struct AxiomParams {
  double alpha = 0.5;
  double harmonic_tol = kHarmonicTol;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
};

struct MAlphaSlack {
  double slack1 = 0.0;  // 1 - r1 - alpha r2
  double slack2 = 0.0;  // 1 - alpha r1 - r2

  bool holds(double tol = 0.0) const { return slack1 >= -tol && slack2 >= -tol; }
};

/// |xy||zu| >= max{|xz||yu| + a|xu||yz|, a|xz||yu| + |xu||yz|} for (x,y), (z,u) separating.
template <SemiMetric S>
MAlphaSlack check_m_alpha(const S& m, const Tetrad& q, double alpha, Tolerance tol = {}) {
  if (!q.nondegenerate(tol) || !separates(PointPair(q.x, q.y), PointPair(q.z, q.u), tol)) {
    throw Error(Errc::not_separating, "M(alpha) is stated for separating pairs (x,y), (z,u)");
  }
  const auto cr = cross_ratio(m, q, tol);
  return {1.0 - cr.r1 - alpha * cr.r2, 1.0 - alpha * cr.r1 - cr.r2};
}

/// r1 + r2 - 1; nonnegative iff |xy||zu| <= |xz||yu| + |xu||yz| on q.
template <SemiMetric S>
double check_ptolemy(const S& m, const Tetrad& q, Tolerance tol = {}) {
  if (!q.admissible(tol)) throw Error(Errc::degenerate_tuple, "Ptolemy check needs an admissible tetrad");
  if (q.nondegenerate(tol)) {
    const auto cr = cross_ratio(m, q, tol);
    return cr.r1 + cr.r2 - 1.0;
  }
  const double lhs = m.distance(q.x, q.y) * m.distance(q.z, q.u);
  const double rhs = m.distance(q.x, q.z) * m.distance(q.y, q.u) + m.distance(q.x, q.u) * m.distance(q.y, q.z);
  if (lhs == 0.0) return rhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return rhs / lhs - 1.0;
}

/// A separating tetrad from four uniform angles: sorted t0 < t1 < t2 < t3,
/// x = t0, z = t1, y = t2, u = t3.
inline Tetrad separating_tetrad(const std::array<double, 4>& angles) {
  auto t = angles;
  std::sort(t.begin(), t.end());
  return {CirclePoint(t[0]), CirclePoint(t[2]), CirclePoint(t[1]), CirclePoint(t[3])};
}

/// Monte-Carlo estimate of the largest alpha for which M(alpha) survives the
/// sampled separating tetrads, clamped to [0, 1]. Deterministic given the seed.
template <SemiMetric S>
double estimate_max_alpha(const S& m, const AxiomParams& params, Tolerance tol = {}) {
  if (params.samples < 1) throw Error(Errc::config, "estimate_max_alpha needs samples >= 1");
  double best = std::numeric_limits<double>::infinity();
  std::int64_t used = 0;
  for (std::int64_t i = 0; i < params.samples; ++i) {
    Rng rng = Rng::stream(params.seed, static_cast<std::uint64_t>(i));
    const Tetrad q = separating_tetrad({rng.angle(), rng.angle(), rng.angle(), rng.angle()});
    if (!q.nondegenerate(tol)) continue;
    const auto cr = cross_ratio(m, q, tol);
    best = std::min({best, (1.0 - cr.r1) / cr.r2, (1.0 - cr.r2) / cr.r1});
    ++used;
  }
  if (used == 0) throw Error(Errc::no_separating_sample, "sampler produced no separating tetrad");
  return std::clamp(best, 0.0, 1.0);
}

}  // namespace mhm
