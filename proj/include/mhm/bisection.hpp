#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "mhm/error.hpp"

namespace mhm {

struct BisectionOptions {
  double rel_tol = 1e-14;  // relative to the initial bracket width
  int max_iter = 200;
  // Once both bracket values are finite, switch to TOMS 748 (bracketing,
  // superlinear). Plain halving otherwise.
  bool accelerate = true;
};

inline constexpr int kAcceleratedCap = 40;

/// Bisection for a sign change of `f` on the open interval (lo, hi).
///
/// `sign_lo` is the sign of f just inside `lo`; the endpoints themselves are
/// never evaluated, so f may diverge there. Every step keeps the invariant
/// sign(f(lo)) == sign_lo and sign(f(hi)) == -sign_lo.
template <class F>
double bisect_signed(F&& f, double lo, double hi, int sign_lo, BisectionOptions opt = {}) {
  const double width = hi - lo;
  const double tol = opt.rel_tol * width;
  double flo = NAN, fhi = NAN;  // unknown until evaluated
  auto checked = [&](double x) {
    const double fx = f(x);
    if (std::isnan(fx)) throw Error(Errc::no_convergence, "objective is NaN inside the bracket");
    return fx;
  };
  bool accelerate = opt.accelerate;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    // The interval has shrunk to one ULP.
    if (mid <= lo || mid >= hi || hi - lo <= tol) return mid;
    if (accelerate && std::isfinite(flo) && std::isfinite(fhi)) {
      // TOMS 748 can stall on a noisy objective (nested root finds); past
      // its cap the bracket it reached goes back to plain halving.
      const auto cap = static_cast<std::uintmax_t>(std::min(opt.max_iter - iter, kAcceleratedCap));
      std::uintmax_t used = cap;  // in: cap, out: evaluations spent
      const auto done = [tol](double a, double b) { return b - a <= tol; };
      const auto r = boost::math::tools::toms748_solve(checked, lo, hi, flo, fhi, done, used);
      if (r.second - r.first <= tol || used < cap) return 0.5 * (r.first + r.second);
      lo = r.first;
      hi = r.second;
      iter += static_cast<int>(used);
      accelerate = false;
      continue;
    }
    const double fm = checked(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (sign_lo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  throw Error(Errc::no_convergence,
              "bisection exceeded " + std::to_string(opt.max_iter) + " iterations");
}

/// Bisection with finite endpoint values; asserts the bracketing sign change.
template <class F>
double bisect(F&& f, double lo, double hi, BisectionOptions opt = {}) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    throw Error(Errc::no_convergence, "no sign change across the bracket");
  }
  return bisect_signed(f, lo, hi, flo > 0.0 ? 1 : -1, opt);
}

}  // namespace mhm
