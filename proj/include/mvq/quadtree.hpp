#pragma once
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mvq/bitstream.hpp"
#include "mvq/cost.hpp"
#include "mvq/motion.hpp"

namespace mvq {

// Sibling grouping rule. threshold 0 is the exact policy (vectors must be
// identical); otherwise four blocks group when pairwise Chebyshev distance
// stays within the threshold. With strict_leaves the test (and the merged
// representative) uses every covered base vector instead of the
// current-level representatives.
struct MergePolicy {
  int threshold = 0;
  bool strict_leaves = false;

  bool exact() const { return threshold == 0; }
};

// Either a split into TL,TR,BL,BR or a terminal carrying one vector.
struct QuadNode {
  bool split = false;
  MotionVector vec{};
  std::array<uint32_t, 4> child{};  // arena indices, valid when split
};

struct QuadForest {
  GridGeometry geom;
  int d_max = 7;
  std::vector<QuadNode> nodes;  // arena, preorder from each root
  std::vector<uint32_t> roots;  // row-major over the max_block grid
};

// Structural comparison (geometry, shape, terminal vectors).
bool forest_equal(const QuadForest& a, const QuadForest& b);

QuadForest build_bottom_up(const MotionField& field, const GridGeometry& geom,
                           const MergePolicy& policy);

// Split-on-disagreement construction; exact policy only. Equivalent to
// build_bottom_up with the exact policy.
QuadForest build_top_down(const MotionField& field, const GridGeometry& geom);

// Fully split forest carrying the field's vectors at min_block leaves.
QuadForest build_unmerged(const MotionField& field);

MotionField flatten(const QuadForest& forest);

// Stream layout: optional flag bit `1`; per node above min_block one bit
// (1 split, 0 terminal) in depth-first preorder, roots row-major, children
// TL,TR,BL,BR; min_block nodes emit nothing; then per terminal in the same
// order dx,dy as 4-bit two's complement; zero padding to a byte.
Bitstream encode_interframe(const QuadForest& forest, bool with_flag);

// Flag bit `0` followed by one 8-bit vector per base block, row-major.
Bitstream encode_interframe_flat(const MotionField& field);

QuadForest decode_interframe(const Bitstream& bits, const GridGeometry& geom,
                             bool with_flag, int d_max = 7);

CostReport cost_report(const QuadForest& forest, bool with_flag);

// Best (all-terminal roots) and worst (fully split) forests for a geometry.
std::pair<CostReport, CostReport> theoretical_bounds(const GridGeometry& geom,
                                                     bool with_flag);

}  // namespace mvq
