#pragma once

// Prescribed parabolic shift: for q = (a, s), s = (v, w), replace v by a
// target v' on the arc d of a not containing w, using a zz-path of at most
// three sides (along h_a, then h_{s1}, then h_{a1}).

#include <cmath>

#include "mhm/zigzag.hpp"

namespace mhm {

struct ShiftOptions {
  double gamma_seed = 1e-4;  // initial search box size
  double gamma_cap = 64.0;
  double aspect = 1.0;  // t / |tau| along the searched ray
  LineOptions line{};
};

/// The three stages behind f(tau, t) for q = (a, s) with fixed endpoint w.
struct ShiftStages {
  PointPair s1;
  CirclePoint v1;  // endpoint of s1 on the arc d
  PointPair a1;
  CirclePoint v_prime;
};

template <SemiMetric S>
ShiftStages shift_stages(const S& m, const HarmonicPair& q, CirclePoint w, double tau, double t, LineOptions opt = {}) {
  const PointPair& a = q.left;
  const PointPair& s = q.right;
  const Arc d = arc_between(a.p(), a.q(), w, opt.tol);
  const PointPair s1 = line_point(m, Line{a, s}, tau, opt).right;
  const CirclePoint v1 = d.strictly_contains(s1.p()) ? s1.p() : s1.q();
  const PointPair a1 = move_along(m, s1, a, v1, t, opt).right;
  const CirclePoint v_prime = (tau == 0.0 || t == 0.0) ? s.other(w, opt.tol) : rho(m, a1, w, opt);
  return {s1, v1, a1, v_prime};
}

/// f(tau, t): move by tau along h_a, then by t along h_{s1} toward v1, then
/// read off v' with (v', w) on h_{a1}. f(0, t) = f(tau, 0) = v.
template <SemiMetric S>
CirclePoint f_map(const S& m, const HarmonicPair& q, CirclePoint w, double tau, double t, LineOptions opt = {}) {
  if (!q.right.has_endpoint(w, opt.tol)) throw Error(Errc::orientation, "w must be an endpoint of the right axis");
  if (tau == 0.0 || t == 0.0) return q.right.other(w, opt.tol);
  return shift_stages(m, q, w, tau, t, opt).v_prime;
}

struct ShiftResult {
  ZZPath path;
  double tau = 0.0;
  double t = 0.0;
  double endpoint_error = 0.0;  // angular distance between rho_{a1}(w) and the target
};

/// Searches the ray (tau, t) = (sigma g, aspect g) for f = v_target. The box
/// size doubles from gamma_seed until f over the ray passes the target; the
/// root is then bracketed between the last two sizes and bisected.
template <SemiMetric S>
ShiftResult parabolic_shift(const S& m, const HarmonicPair& q, CirclePoint w, CirclePoint v_target,
                            ShiftOptions opt = {}) {
  const Tolerance tol = opt.line.tol;
  if (!q.right.has_endpoint(w, tol)) throw Error(Errc::orientation, "w must be an endpoint of the right axis");
  const PointPair& a = q.left;
  const CirclePoint v = q.right.other(w, tol);
  const Arc d = arc_between(a.p(), a.q(), w, tol);
  if (a.has_endpoint(v_target, tol) || !d.strictly_contains(v_target)) {
    throw Error(Errc::target_outside_arc, "target must lie on the arc of a not containing w");
  }
  ShiftResult result{ZZPath::at(q)};
  if (same_point(v, v_target, tol)) return result;

  const double target = d.offset_of(v_target);
  const double origin = d.offset_of(v);
  const double dir = target > origin ? 1.0 : -1.0;
  // Positive once f(sigma g, aspect g) has passed the target.
  auto overshoot = [&](double sigma, double g) {
    return dir * (d.offset_of(f_map(m, q, w, sigma * g, opt.aspect * g, opt.line)) - target);
  };

  double sigma = 0.0;
  double lo = 0.0, hi = 0.0;
  for (double g = opt.gamma_seed; g <= opt.gamma_cap; g *= 2.0) {
    for (double sg : {1.0, -1.0}) {
      if (overshoot(sg, g) >= 0.0) {
        sigma = sg;
        break;
      }
    }
    if (sigma != 0.0) {
      lo = g == opt.gamma_seed ? 0.0 : 0.5 * g;
      hi = g;
      break;
    }
  }
  if (sigma == 0.0) throw Error(Errc::no_convergence, "search box reached its cap without enclosing the target");

  // overshoot(sigma, 0) = -|target - origin| < 0.
  const double g = bisect_signed([&](double gg) { return overshoot(sigma, gg); }, lo, hi, -1, opt.line.bisection);
  result.tau = sigma * g;
  result.t = opt.aspect * g;

  const ShiftStages st = shift_stages(m, q, w, result.tau, result.t, opt.line);
  result.endpoint_error = angular_distance(st.v_prime, v_target);
  const PointPair s_target(v_target, w, tol);
  if (harmonic_defect(m, st.a1, s_target, tol) > kHarmonicTol) {
    throw Error(Errc::no_convergence, "shift search ended away from the target");
  }
  push_side(result.path, a, {a, st.s1});
  push_side(result.path, st.s1, {st.a1, st.s1});
  push_side(result.path, st.a1, {st.a1, s_target});
  return result;
}

}  // namespace mhm
