#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mhm/lines.hpp"

namespace mhm {

/// Zig-zag path: vertices q_1 .. q_{n+1} and, for each side i, the axis of the
/// line carrying it. Consecutive sides switch axes at their shared vertex.
struct ZZPath {
  std::vector<HarmonicPair> vertices;
  std::vector<PointPair> axes;

  std::size_t sides() const { return axes.size(); }
  bool empty() const { return axes.empty(); }

  static ZZPath at(const HarmonicPair& q) { return {{q}, {}}; }
};

struct PathTolerance {
  double harmonic = 1e-9;
  Tolerance tol{1e-9};
};

struct PathCheck {
  bool valid = true;
  std::size_t index = 0;  // offending vertex or side
  std::string reason;
};

/// The pair of q other than `axis`, if `axis` is one of q's axes.
inline std::optional<PointPair> other_axis(const HarmonicPair& q, const PointPair& axis, Tolerance tol) {
  if (same_pair(q.left, axis, tol)) return q.right;
  if (same_pair(q.right, axis, tol)) return q.left;
  return std::nullopt;
}

template <SemiMetric S>
PathCheck validate_path(const S& m, const ZZPath& path, PathTolerance ptol = {}) {
  if (path.vertices.empty()) {
    if (!path.axes.empty()) return {false, 0, "sides without vertices"};
    return {};
  }
  if (path.vertices.size() != path.axes.size() + 1) return {false, 0, "vertex/side count mismatch"};
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    const auto& q = path.vertices[i];
    try {
      if (!is_harmonic(m, q, ptol.harmonic, ptol.tol)) return {false, i, "vertex is not harmonic"};
    } catch (const Error&) {
      return {false, i, "vertex is degenerate"};
    }
  }
  for (std::size_t i = 0; i < path.axes.size(); ++i) {
    if (!other_axis(path.vertices[i], path.axes[i], ptol.tol) ||
        !other_axis(path.vertices[i + 1], path.axes[i], ptol.tol)) {
      return {false, i, "side endpoints do not share the side's axis"};
    }
    if (i > 0 && same_pair(path.axes[i - 1], path.axes[i], ptol.tol)) {
      return {false, i, "consecutive sides do not switch axes"};
    }
  }
  return {};
}

template <SemiMetric S>
double side_length(const S& m, const ZZPath& path, std::size_t i, Tolerance tol = Tolerance{1e-9}) {
  const auto& axis = path.axes[i];
  return segment_length(m, axis, *other_axis(path.vertices[i], axis, tol), *other_axis(path.vertices[i + 1], axis, tol),
                        tol);
}

/// |S|: the sum of the side lengths.
template <SemiMetric S>
double path_length(const S& m, const ZZPath& path, PathTolerance ptol = {}) {
  const auto check = validate_path(m, path, ptol);
  if (!check.valid) throw Error(Errc::invalid_path, check.reason + " at index " + std::to_string(check.index));
  double total = 0.0;
  for (std::size_t i = 0; i < path.sides(); ++i) total += side_length(m, path, i, ptol.tol);
  return total;
}

/// Appends a side along `axis` ending at `q`. A side on the same axis as the
/// previous one is merged into it; a side that does not move is dropped.
inline void push_side(ZZPath& path, const PointPair& axis, const HarmonicPair& q, Tolerance tol = Tolerance{1e-12}) {
  if (same_harmonic(path.vertices.back(), q, tol)) return;
  if (!path.axes.empty() && same_pair(path.axes.back(), axis, tol)) {
    path.vertices.back() = q;
    // Merging can make the merged side stationary.
    if (same_harmonic(path.vertices[path.vertices.size() - 2], q, tol)) {
      path.vertices.pop_back();
      path.axes.pop_back();
    }
    return;
  }
  path.axes.push_back(axis);
  path.vertices.push_back(q);
}

/// Concatenation; `tail` must start where `head` ends.
inline ZZPath concat(ZZPath head, const ZZPath& tail, Tolerance tol = Tolerance{1e-12}) {
  if (head.vertices.empty()) return tail;
  for (std::size_t i = 0; i < tail.sides(); ++i) push_side(head, tail.axes[i], tail.vertices[i + 1], tol);
  return head;
}

inline ZZPath reversed(const ZZPath& path) {
  ZZPath r;
  r.vertices.assign(path.vertices.rbegin(), path.vertices.rend());
  r.axes.assign(path.axes.rbegin(), path.axes.rend());
  return r;
}

}  // namespace mhm
