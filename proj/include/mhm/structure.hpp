#pragma once

// Moebius structures on the circle. A structure is represented by one bounded
// base semi-metric; every other member of its class is reached by a metric
// inversion (ChartMetric).

#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "mhm/circle.hpp"

namespace mhm {

template <class S>
concept SemiMetric = requires(const S& s, CirclePoint x, CirclePoint y) {
  { s.distance(x, y) } -> std::convertible_to<double>;
};

/// Chordal distance between two points of the unit circle.
inline double chord(CirclePoint x, CirclePoint y) {
  return 2.0 * std::abs(std::sin(0.5 * (x.theta() - y.theta())));
}

struct CanonicalStructure {
  double distance(CirclePoint x, CirclePoint y) const { return chord(x, y); }
  std::string label() const { return "canonical"; }
};

/// Base distance chord^p. Exploratory: whether it satisfies P or M(alpha) is
/// measured, not assumed.
struct SnowflakeStructure {
  double exponent = 1.0;

  double distance(CirclePoint x, CirclePoint y) const { return std::pow(chord(x, y), exponent); }
  std::string label() const { return "snowflake:" + std::to_string(exponent); }
};

/// Type-erased structure, used where the structure is chosen at run time.
class MoebiusStructure {
 public:
  template <SemiMetric S>
    requires(!std::same_as<std::remove_cvref_t<S>, MoebiusStructure>)
  explicit MoebiusStructure(S s, std::string label)
      : base_([s = std::move(s)](CirclePoint x, CirclePoint y) { return s.distance(x, y); }),
        label_(std::move(label)) {}

  double distance(CirclePoint x, CirclePoint y) const { return base_(x, y); }
  const std::string& label() const { return label_; }

 private:
  std::function<double(CirclePoint, CirclePoint)> base_;
  std::string label_;
};

inline MoebiusStructure canonical_structure() {
  return MoebiusStructure(CanonicalStructure{}, "canonical");
}

inline MoebiusStructure snowflake_structure(double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw Error(Errc::config, "snowflake exponent must lie in (0, 1]");
  }
  return MoebiusStructure(SnowflakeStructure{exponent}, "snowflake:" + std::to_string(exponent));
}

/// The member of the class with infinitely remote point omega:
/// d_omega(x, y) = d(x, y) / (d(x, omega) d(y, omega)).
template <SemiMetric S>
class ChartMetric {
 public:
  ChartMetric(const S& structure, CirclePoint omega, Tolerance tol = {})
      : structure_(&structure), omega_(omega), tol_(tol) {}

  double distance(CirclePoint x, CirclePoint y) const {
    if (same_point(x, y, tol_)) return 0.0;
    if (same_point(x, omega_, tol_) || same_point(y, omega_, tol_)) {
      return std::numeric_limits<double>::infinity();
    }
    const double dxy = structure_->distance(x, y);
    return dxy / (structure_->distance(x, omega_) * structure_->distance(y, omega_));
  }

  CirclePoint omega() const { return omega_; }

 private:
  const S* structure_;
  CirclePoint omega_;
  Tolerance tol_;
};

template <SemiMetric S>
double chart_distance(const S& m, CirclePoint omega, CirclePoint x, CirclePoint y,
                      Tolerance tol = {}) {
  return ChartMetric<S>(m, omega, tol).distance(x, y);
}

}  // namespace mhm
