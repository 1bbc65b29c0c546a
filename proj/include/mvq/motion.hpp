#pragma once
#include <vector>

#include "mvq/frame.hpp"

namespace mvq {

// Two-parameter motion model: integer pixel displacement.
struct MotionVector {
  int dx = 0;
  int dy = 0;
};

inline bool operator==(MotionVector a, MotionVector b) { return a.dx == b.dx && a.dy == b.dy; }
inline bool operator!=(MotionVector a, MotionVector b) { return !(a == b); }

inline int chebyshev(MotionVector a, MotionVector b) {
  const int ddx = a.dx > b.dx ? a.dx - b.dx : b.dx - a.dx;
  const int ddy = a.dy > b.dy ? a.dy - b.dy : b.dy - a.dy;
  return ddx > ddy ? ddx : ddy;
}

enum class SearchMode { ConjugateDirection, FullSearch };

struct SearchParams {
  int d_max = 7;
  SearchMode mode = SearchMode::ConjugateDirection;
  int max_refinement_passes = 2;
};

// One vector per min_block base block, row-major over the block grid.
struct MotionField {
  GridGeometry geom;
  int d_max = 7;
  std::vector<MotionVector> vectors;

  MotionVector at(int bx, int by) const { return vectors[size_t(by) * geom.blocks_x() + bx]; }
  MotionVector& at(int bx, int by) { return vectors[size_t(by) * geom.blocks_x() + bx]; }
};

bool operator==(const MotionField& a, const MotionField& b);
inline bool operator!=(const MotionField& a, const MotionField& b) { return !(a == b); }

struct SearchResult {
  MotionVector vec;
  double mad = 0.0;
};

// Mean absolute difference between the reference block at (origin) and the
// target block displaced by v. Exact integer SAD, divided once.
double block_mad(const Frame& reference, const Frame& target, int origin_x, int origin_y,
                 int size, MotionVector v);

// Exhaustive scan of the +/- d_max window; candidates whose displaced
// footprint leaves the target are skipped. Ties resolved by smaller
// |dx|+|dy|, then smaller dy, then smaller dx.
SearchResult full_search(const Frame& reference, const Frame& target, int origin_x,
                         int origin_y, int size, const SearchParams& params);

// One-at-a-time axis descent from (0,0): single steps along dx while they
// improve, then along dy, the pass repeated up to max_refinement_passes
// times or until nothing moves.
SearchResult conjugate_direction_search(const Frame& reference, const Frame& target,
                                        int origin_x, int origin_y, int size,
                                        const SearchParams& params);

MotionField estimate_field(const Frame& reference, const Frame& target,
                           const GridGeometry& geom, const SearchParams& params);

}  // namespace mvq
