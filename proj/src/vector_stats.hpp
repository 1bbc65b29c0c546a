#pragma once
#include <algorithm>

#include "mvq/motion.hpp"
#include "mvq/quadtree.hpp"

namespace mvq::detail {

// Bounding box and sum of a set of vectors; drives merge tests and merged
// representatives. Pairwise Chebyshev distance <= T over a set is the same
// as per-component spread <= T.
struct VecStats {
  int min_dx = 0, max_dx = 0, min_dy = 0, max_dy = 0;
  long sum_dx = 0, sum_dy = 0;
  long count = 0;

  static VecStats of(MotionVector v) {
    return {v.dx, v.dx, v.dy, v.dy, v.dx, v.dy, 1};
  }

  void add(const VecStats& o) {
    if (count == 0) {
      *this = o;
      return;
    }
    min_dx = std::min(min_dx, o.min_dx);
    max_dx = std::max(max_dx, o.max_dx);
    min_dy = std::min(min_dy, o.min_dy);
    max_dy = std::max(max_dy, o.max_dy);
    sum_dx += o.sum_dx;
    sum_dy += o.sum_dy;
    count += o.count;
  }

  int spread() const { return std::max(max_dx - min_dx, max_dy - min_dy); }

  // Component-wise arithmetic mean rounded toward zero (C++ integer
  // division truncates toward zero), clamped to the displacement bound.
  MotionVector mean_toward_zero(int d_max) const {
    MotionVector v{int(sum_dx / count), int(sum_dy / count)};
    v.dx = std::clamp(v.dx, -d_max, d_max);
    v.dy = std::clamp(v.dy, -d_max, d_max);
    return v;
  }
};

// Merge decision for a group of current-level representatives backed by
// `covered` (all base vectors under the group). Returns true and sets
// `rep` when the group may collapse into one terminal.
inline bool merge_group(const MergePolicy& policy, const MotionVector* reps, int n,
                        const VecStats& covered, int d_max, MotionVector& rep) {
  if (policy.exact()) {
    for (int i = 1; i < n; ++i)
      if (reps[i] != reps[0]) return false;
    rep = reps[0];
    return true;
  }
  if (policy.strict_leaves) {
    if (covered.spread() > policy.threshold) return false;
    rep = covered.mean_toward_zero(d_max);
    return true;
  }
  VecStats s;
  for (int i = 0; i < n; ++i) s.add(VecStats::of(reps[i]));
  if (s.spread() > policy.threshold) return false;
  rep = s.mean_toward_zero(d_max);
  return true;
}

}  // namespace mvq::detail
