#pragma once

// Coordinates around a harmonic pair q = (a, s), a = (x, y), s = (v, w):
// the w-chart normalized by |xy|_w = 1 measures the a-coordinates, and the
// x-chart obtained from it by metric inversion measures the s-coordinates.
// U_eps(a) x V_eps(s) is the product of the eps-balls in these charts.

#include <algorithm>
#include <array>
#include <limits>

#include "mhm/cross_ratio.hpp"

namespace mhm {

struct Frame {
  CirclePoint x, y, v, w;

  HarmonicPair pair() const { return {PointPair(x, y), PointPair(v, w)}; }
};

/// The eight labelings of q as (a, s) with a = (x, y), s = (v, w).
inline std::array<Frame, 8> frames_of(const HarmonicPair& q) {
  std::array<Frame, 8> out{};
  int k = 0;
  for (const auto& [a, s] : {std::pair{q.left, q.right}, std::pair{q.right, q.left}}) {
    for (int xs = 0; xs < 2; ++xs) {
      for (int ws = 0; ws < 2; ++ws) {
        const CirclePoint x = xs ? a.q() : a.p(), y = xs ? a.p() : a.q();
        const CirclePoint w = ws ? s.p() : s.q(), v = ws ? s.q() : s.p();
        out[k++] = {x, y, v, w};
      }
    }
  }
  return out;
}

template <SemiMetric S>
class FrameCharts {
 public:
  FrameCharts(const S& m, const Frame& f) : m_(&m), f_(f) {
    k_ = m.distance(f.x, f.w) * m.distance(f.y, f.w) / m.distance(f.x, f.y);
  }

  /// |pq|_w with |xy|_w = 1.
  double w_chart(CirclePoint p, CirclePoint q) const {
    if (p == q) return 0.0;
    const double dp = m_->distance(p, f_.w), dq = m_->distance(q, f_.w);
    if (dp == 0.0 || dq == 0.0) return std::numeric_limits<double>::infinity();
    return k_ * m_->distance(p, q) / (dp * dq);
  }

  /// |pq|_x = |pq|_w / (|px|_w |qx|_w), expressed in the base metric.
  double x_chart(CirclePoint p, CirclePoint q) const {
    if (p == q) return 0.0;
    const double dp = m_->distance(p, f_.x), dq = m_->distance(q, f_.x);
    if (dp == 0.0 || dq == 0.0) return std::numeric_limits<double>::infinity();
    return m_->distance(p, q) * m_->distance(f_.x, f_.w) * m_->distance(f_.x, f_.y) /
           (m_->distance(f_.y, f_.w) * dp * dq);
  }

  const Frame& frame() const { return f_; }

 private:
  const S* m_;
  Frame f_;
  double k_ = 1.0;
};

/// Chart displacements of q2 relative to a labeled q; max over the four
/// coordinates, minimized over the ways q2 can be matched to the frame.
struct Displacement {
  double dx = 0.0, dy = 0.0, dv = 0.0, dw = 0.0;

  double max() const { return std::max({dx, dy, dv, dw}); }
};

template <SemiMetric S>
Displacement displacement(const S& m, const Frame& f, const HarmonicPair& q2) {
  const FrameCharts<S> charts(m, f);
  Displacement best{};
  double best_max = std::numeric_limits<double>::infinity();
  for (const Frame& g : frames_of(q2)) {
    const Displacement d{charts.w_chart(f.x, g.x), charts.w_chart(f.y, g.y), charts.x_chart(f.v, g.v),
                         charts.x_chart(f.w, g.w)};
    if (d.max() < best_max) {
      best = d;
      best_max = d.max();
    }
  }
  return best;
}

}  // namespace mhm
