#pragma once

// The zz-distance delta(q, q') = inf |S| over zz-paths from q to q'. Upper
// bounds come from explicit paths (connect + derivative-free refinement of
// their free parameters); lower bounds from the local length estimate of
// zz-paths that stay near q.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include "mhm/neighborhood.hpp"
#include "mhm/shift.hpp"

namespace mhm {

struct ConnectOptions {
  ShiftOptions shift{};
  double first_aspect = 1.0;
  double second_aspect = 1.0;
  double detour = 1.0;  // initial offset along h_a for the four-side perpendicular route
};

/// Labeling for the shift route: q = (a, s), s = (v, w); q2 = (a', s'), s' = (v', w').
struct ShiftLabeling {
  bool q_swap = false;       // a = q.right
  bool w_first = false;      // w = s.p()
  bool q2_swap = false;      // s' = q2.left
  bool target_first = true;  // v' = s'.p()
};

inline std::array<ShiftLabeling, 16> all_shift_labelings() {
  std::array<ShiftLabeling, 16> out{};
  for (int k = 0; k < 16; ++k) out[k] = {bool(k & 1), bool(k & 2), bool(k & 4), bool(k & 8)};
  return out;
}

/// Two prescribed parabolic shifts (v -> v', then w -> w') followed by one
/// side along h_{s'}. Returns nullopt when the labeling is infeasible.
template <SemiMetric S>
std::optional<ZZPath> shift_route(const S& m, const HarmonicPair& q, const HarmonicPair& q2, ShiftLabeling lab,
                                  const ConnectOptions& opt) {
  const Tolerance tol = opt.shift.line.tol;
  const PointPair a = lab.q_swap ? q.right : q.left;
  const PointPair s = lab.q_swap ? q.left : q.right;
  const CirclePoint w = lab.w_first ? s.p() : s.q();
  const CirclePoint v = s.other(w, tol);
  const PointPair a2 = lab.q2_swap ? q2.right : q2.left;
  const PointPair s2 = lab.q2_swap ? q2.left : q2.right;
  const CirclePoint v2 = lab.target_first ? s2.p() : s2.q();
  const CirclePoint w2 = s2.other(v2, tol);

  if (a.has_endpoint(v2, tol) || a.has_endpoint(w, tol) || same_point(v2, w, tol)) return std::nullopt;
  if (!arc_between(a.p(), a.q(), w, tol).strictly_contains(v2)) return std::nullopt;
  try {
    ShiftOptions first = opt.shift;
    first.aspect = opt.first_aspect;
    const ShiftResult r1 = parabolic_shift(m, HarmonicPair{a, s}, w, v2, first);
    const PointPair a1 = r1.path.vertices.back().left;
    if (a1.has_endpoint(w2, tol) || a1.has_endpoint(v2, tol) || same_point(v2, w2, tol)) return std::nullopt;
    if (!arc_between(a1.p(), a1.q(), v2, tol).strictly_contains(w2)) return std::nullopt;
    ShiftOptions second = opt.shift;
    second.aspect = opt.second_aspect;
    const ShiftResult r2 = parabolic_shift(m, HarmonicPair{a1, PointPair(v2, w, tol)}, v2, w2, second);
    ZZPath path = concat(r1.path, r2.path);
    const PointPair a_end = path.vertices.back().left;
    path.vertices.back() = {a_end, s2};
    push_side(path, s2, {a2, s2});
    (void)v;
    // Extreme search boxes can push vertices to where rho loses precision.
    if (!validate_path(m, path).valid) return std::nullopt;
    return path;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Route through common perpendiculars, choosing axis A of q and A' of q2:
/// one side if A = A', three if A and A' are strongly causal, otherwise four
/// via an intermediate pair on h_A near an endpoint of A not on A'.
template <SemiMetric S>
std::optional<ZZPath> perpendicular_route(const S& m, const HarmonicPair& q, const HarmonicPair& q2, bool q_swap,
                                          bool q2_swap, const ConnectOptions& opt) {
  const LineOptions& lo = opt.shift.line;
  const Tolerance tol = lo.tol;
  const PointPair A = q_swap ? q.right : q.left;
  const PointPair B = q_swap ? q.left : q.right;
  const PointPair A2 = q2_swap ? q2.right : q2.left;
  const PointPair B2 = q2_swap ? q2.left : q2.right;
  ZZPath path = ZZPath::at(q);
  try {
    if (same_pair(A, A2, tol)) {
      push_side(path, A, {A2, B2});
      return path;
    }
    if (strong_causal(A, A2, tol)) {
      const PointPair mid = common_perpendicular(m, A, A2, lo).pair();
      push_side(path, A, {A, mid});
      push_side(path, mid, {A2, mid});
      push_side(path, A2, {A2, B2});
      if (!validate_path(m, path).valid) return std::nullopt;
      return path;
    }
    const CirclePoint e = A2.has_endpoint(A.p(), tol) ? A.q() : A.p();
    for (double tau = opt.detour; tau <= 64.0; tau *= 2.0) {
      const PointPair m0 = move_along(m, A, B, e, tau, lo).right;
      if (!strong_causal(m0, A2, tol)) continue;
      const PointPair k = common_perpendicular(m, m0, A2, lo).pair();
      push_side(path, A, {A, m0});
      push_side(path, m0, {k, m0});
      push_side(path, k, {k, A2});
      push_side(path, A2, {A2, B2});
      if (!validate_path(m, path).valid) return std::nullopt;
      return path;
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

/// Detour variant of the perpendicular route: first move along h_A by the
/// signed offset tau to (A, m0), then go through the common perpendicular of
/// m0 and A'. Four sides; tau = 0 gives the three-side route.
template <SemiMetric S>
std::optional<ZZPath> detour_route(const S& m, const HarmonicPair& q, const HarmonicPair& q2, bool q_swap, bool q2_swap,
                                   double tau, const ConnectOptions& opt) {
  const LineOptions& lo = opt.shift.line;
  const Tolerance tol = lo.tol;
  const PointPair A = q_swap ? q.right : q.left;
  const PointPair B = q_swap ? q.left : q.right;
  const PointPair A2 = q2_swap ? q2.right : q2.left;
  const PointPair B2 = q2_swap ? q2.left : q2.right;
  try {
    const PointPair m0 = line_point(m, Line{A, B}, tau, lo).right;
    if (!strong_causal(m0, A2, tol)) return std::nullopt;
    const PointPair k = common_perpendicular(m, m0, A2, lo).pair();
    ZZPath path = ZZPath::at(q);
    push_side(path, A, {A, m0});
    push_side(path, m0, {k, m0});
    push_side(path, k, {k, A2});
    push_side(path, A2, {A2, B2});
    if (!validate_path(m, path).valid) return std::nullopt;
    return path;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// A zz-path from q to q2 with at most seven sides: the two-shift route when
/// some labeling makes it feasible (the route used for nearby pairs),
/// otherwise the perpendicular route.
template <SemiMetric S>
ZZPath connect(const S& m, const HarmonicPair& q, const HarmonicPair& q2, const ConnectOptions& opt = {}) {
  if (same_harmonic(q, q2, opt.shift.line.tol)) return ZZPath::at(q);
  std::optional<ZZPath> best;
  double best_len = std::numeric_limits<double>::infinity();
  auto consider = [&](std::optional<ZZPath> p) {
    if (!p) return;
    const double len = path_length(m, *p);
    if (len < best_len) {
      best_len = len;
      best = std::move(p);
    }
  };
  if (const auto common = common_axis(q, q2, opt.shift.line.tol)) {
    ZZPath p = ZZPath::at(q);
    push_side(p, common->axis, q2);
    consider(p);
  }
  if (!best) {
    for (const auto& lab : all_shift_labelings()) consider(shift_route(m, q, q2, lab, opt));
  }
  if (!best) {
    for (int k = 0; k < 4; ++k) consider(perpendicular_route(m, q, q2, k & 1, k & 2, opt));
  }
  if (!best) throw Error(Errc::no_convergence, "no zz-path construction succeeded");
  return *best;
}

struct DeltaBudget {
  int evaluations = 32;  // refinement evaluations after the constructive candidates
};

// Refinement evaluations go to the shift route first, the rest to the detour.
inline constexpr int kShiftRefineShare = 16;
inline constexpr std::array<double, 6> kDetourGrid{0.125, 0.25, 0.5, 1.0, 2.0, 4.0};

struct DeltaEstimate {
  double length = 0.0;
  ZZPath path;
};

namespace detail {

inline bool hm_key_less(const HarmonicPair& q, const HarmonicPair& q2) {
  const auto key = [](const HarmonicPair& h) {
    const auto n = h.normalized();
    return std::tuple(n.left.p().theta(), n.left.q().theta(), n.right.p().theta(), n.right.q().theta());
  };
  return key(q) < key(q2);
}

/// Compass search with halving steps; evaluations are counted against `budget`.
template <class F>
void compass_search(F&& f, std::vector<double> x, double fx, double step, int budget) {
  while (budget > 0 && step > 1e-3) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && budget > 0 && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        if (budget <= 0) break;
        auto trial = x;
        trial[i] += sgn * step;
        --budget;
        const double ft = f(trial);
        if (ft < fx) {
          x = trial;
          fx = ft;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
}

}  // namespace detail

/// Upper bound on delta(q, q2) with a witnessing path. Deterministic, exactly
/// symmetric in its arguments, and nonincreasing in the budget.
template <SemiMetric S>
DeltaEstimate delta_upper_path(const S& m, const HarmonicPair& q, const HarmonicPair& q2, DeltaBudget budget = {},
                               ConnectOptions opt = {}) {
  const Tolerance tol = opt.shift.line.tol;
  if (same_harmonic(q, q2, tol)) return {0.0, ZZPath::at(q)};
  if (detail::hm_key_less(q2, q)) {
    auto r = delta_upper_path(m, q2, q, budget, opt);
    r.path = reversed(r.path);
    return r;
  }

  DeltaEstimate best{std::numeric_limits<double>::infinity(), {}};
  auto offer = [&](const std::optional<ZZPath>& p, bool backward) {
    if (!p) return std::numeric_limits<double>::infinity();
    const double len = path_length(m, *p);
    if (len < best.length) best = {len, backward ? reversed(*p) : *p};
    return len;
  };

  if (const auto common = common_axis(q, q2, tol)) {
    ZZPath p = ZZPath::at(q);
    push_side(p, common->axis, q2);
    offer(p, false);
  }

  struct Seed {
    double length;
    bool backward;
    ShiftLabeling lab;
  };
  std::optional<Seed> shift_seed;
  struct DetourSeed {
    double length;
    bool backward;
    int labeling;
    double tau;
  };
  std::optional<DetourSeed> detour_seed;
  for (bool backward : {false, true}) {
    const HarmonicPair& from = backward ? q2 : q;
    const HarmonicPair& to = backward ? q : q2;
    for (const auto& lab : all_shift_labelings()) {
      const double len = offer(shift_route(m, from, to, lab, opt), backward);
      if (!shift_seed || len < shift_seed->length) shift_seed = Seed{len, backward, lab};
    }
    for (int k = 0; k < 4; ++k) {
      offer(perpendicular_route(m, from, to, k & 1, k & 2, opt), backward);
      for (double mag : kDetourGrid) {
        for (double sgn : {1.0, -1.0}) {
          const double len = offer(detour_route(m, from, to, k & 1, k & 2, sgn * mag, opt), backward);
          if (!detour_seed || len < detour_seed->length) detour_seed = DetourSeed{len, backward, k, sgn * mag};
        }
      }
    }
  }

  if (shift_seed && std::isfinite(shift_seed->length) && budget.evaluations > 0) {
    const HarmonicPair& from = shift_seed->backward ? q2 : q;
    const HarmonicPair& to = shift_seed->backward ? q : q2;
    auto objective = [&](const std::vector<double>& logs) {
      ConnectOptions o = opt;
      o.first_aspect = std::exp(logs[0]);
      o.second_aspect = std::exp(logs[1]);
      return offer(shift_route(m, from, to, shift_seed->lab, o), shift_seed->backward);
    };
    detail::compass_search(objective, {0.0, 0.0}, shift_seed->length, 1.0,
                           std::min(budget.evaluations, kShiftRefineShare));
  }
  if (detour_seed && std::isfinite(detour_seed->length) && budget.evaluations > kShiftRefineShare) {
    const HarmonicPair& from = detour_seed->backward ? q2 : q;
    const HarmonicPair& to = detour_seed->backward ? q : q2;
    const int k = detour_seed->labeling;
    auto objective = [&](const std::vector<double>& x) {
      return offer(detour_route(m, from, to, k & 1, k & 2, x[0], opt), detour_seed->backward);
    };
    detail::compass_search(objective, {detour_seed->tau}, detour_seed->length, 0.5 * std::abs(detour_seed->tau),
                           budget.evaluations - kShiftRefineShare);
  }
  if (!std::isfinite(best.length)) throw Error(Errc::no_convergence, "no zz-path construction succeeded");
  return best;
}

template <SemiMetric S>
double delta_upper(const S& m, const HarmonicPair& q, const HarmonicPair& q2, DeltaBudget budget = {},
                   ConnectOptions opt = {}) {
  return delta_upper_path(m, q, q2, budget, opt).length;
}

/// Constants of the local length estimate: c = alpha(1+alpha)sqrt(alpha)/16 and
/// t(eps) = 2 asinh(c eps), the largest t with sinh(t/2) <= c eps.
struct CertificateParams {
  double alpha = 0.5;
  double epsilon = 1.0 / 16.0;

  double c() const { return alpha * (1.0 + alpha) * std::sqrt(alpha) / 16.0; }
  double t_eps() const { return 2.0 * std::asinh(c() * epsilon); }
  bool applicable() const { return epsilon > 0.0 && epsilon <= 1.0 / 16.0 && alpha > 0.0 && alpha < 1.0; }
};

/// Lower bound on delta(q, q2). For every labeling of q: if q2 lies in
/// U_eps(a) x V_eps(s), every path shorter than t(eps) moves the coordinates
/// by at most |S| / c, giving c * displacement; otherwise no path shorter than
/// t(eps) reaches q2, giving t(eps) / 2. The best labeling wins.
template <SemiMetric S>
std::optional<double> delta_lower_certificate(const S& m, const HarmonicPair& q, const HarmonicPair& q2,
                                              const CertificateParams& params) {
  if (!params.applicable()) return std::nullopt;
  const double c = params.c();
  const double t = params.t_eps();
  double best = 0.0;
  for (const Frame& f : frames_of(q)) {
    const double d = displacement(m, f, q2).max();
    const double bound = d < params.epsilon ? c * d : std::min(0.5 * t, c * d);
    best = std::max(best, bound);
  }
  return best;
}

}  // namespace mhm
