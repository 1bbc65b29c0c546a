#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "mvq/bitstream.hpp"
#include "mvq/cost.hpp"
#include "mvq/quadtree.hpp"

namespace mvq {

// Two consecutive motion fields over the same grid.
struct FieldPair {
  MotionField earlier;  // field written into the previous frame
  MotionField later;
};

bool operator==(const FieldPair& a, const FieldPair& b);
inline bool operator!=(const FieldPair& a, const FieldPair& b) { return !(a == b); }

// A cell either splits spatially, carries one vector for both fields
// (span 2), or forks into two independent per-field subtrees whose
// terminals each cover one field (span 1).
enum class Kind3D : uint8_t { Split, Span2, Fork };

struct Node3D {
  Kind3D kind = Kind3D::Span2;
  MotionVector vec{};               // Span2 only
  std::array<uint32_t, 4> child{};  // Split only
  uint32_t fork_earlier = 0;        // Fork only: indices into nodes2d
  uint32_t fork_later = 0;
};

struct Forest3D {
  GridGeometry geom;
  int d_max = 7;
  std::vector<Node3D> nodes;
  std::vector<QuadNode> nodes2d;  // per-field subtrees under Fork cells
  std::vector<uint32_t> roots;
};

bool forest3d_equal(const Forest3D& a, const Forest3D& b);

// Bottom-up joint construction. Minimum-size cells pair temporally when the
// two co-located vectors satisfy the policy; a 2x2 group of span-2 cells
// merges when the covered vectors of both fields satisfy it; groups that
// are temporally split everywhere continue merging per field.
Forest3D build_3d(const FieldPair& pair, const GridGeometry& geom,
                  const MergePolicy& policy);

FieldPair flatten_3d(const Forest3D& forest);

// Extension stream: per cell above min_block `1` = split, else `0` followed
// by a span bit (1 = one vector for both fields, 0 = fork, then the two
// per-field subtrees coded with the interframe tree rules); min_block cells
// emit the span bit only. Vectors follow in traversal order, earlier-field
// terminals before later-field terminals inside each fork.
Bitstream encode_3d(const Forest3D& forest);
Forest3D decode_3d(const Bitstream& bits, const GridGeometry& geom, int d_max = 7);

// Byte accounting against a two-fields baseline (one byte per base block
// per field).
CostReport cost_report_3d(const Forest3D& forest);

}  // namespace mvq
