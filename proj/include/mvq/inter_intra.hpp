#pragma once
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mvq/bitstream.hpp"
#include "mvq/cost.hpp"
#include "mvq/quadtree.hpp"

namespace mvq {

enum class PredictorKind : uint8_t { Inter, Intra };

// Per-block mode decision with the errors that produced it. The vector is
// meaningful for inter decisions only.
struct Decision {
  PredictorKind kind = PredictorKind::Inter;
  MotionVector vec{};
  double inter_error = 0.0;
  double intra_error = 0.0;
};

// Flattened per-block mode, the text-format payload.
struct BlockMode {
  PredictorKind kind = PredictorKind::Inter;
  MotionVector vec{};
};

inline bool operator==(BlockMode a, BlockMode b) {
  return a.kind == b.kind && (a.kind == PredictorKind::Intra || a.vec == b.vec);
}

// Intra-error penalty. When adaptive, the penalty leans toward the mode
// already chosen by the decided siblings of the 2x2 group.
struct PenaltyPolicy {
  double base_p = 1.2;
  bool adaptive = false;
  double neighbor_bias = 1.25;

  void check() const;
};

enum class MixedKind : uint8_t { Split, Inter, Intra };

struct MixedNode {
  MixedKind kind = MixedKind::Inter;
  MotionVector vec{};               // Inter terminals only
  std::array<uint32_t, 4> child{};  // Split only, TL,TR,BL,BR
};

struct MixedForest {
  GridGeometry geom;
  int d_max = 7;
  std::vector<MixedNode> nodes;
  std::vector<uint32_t> roots;
};

bool mixed_forest_equal(const MixedForest& a, const MixedForest& b);

// MAD of a block against its own rounded mean (half-up): the DC predictor.
double intra_error_dc(const Frame& target, int origin_x, int origin_y, int size);

// Inter wins iff inter_error < penalty * intra_error; ties go to intra.
PredictorKind decide_block(double inter_error, double intra_error, double penalty);

double effective_penalty(const PenaltyPolicy& policy,
                         const std::vector<PredictorKind>& decided_siblings);

// Per-block decisions, row-major. Within each aligned 2x2 sibling group the
// blocks are decided in TL,TR,BL,BR order so the adaptive penalty can see
// the siblings already decided.
std::vector<Decision> decide_blocks(const MotionField& field, const Frame& reference,
                                    const Frame& target, const GridGeometry& geom,
                                    const PenaltyPolicy& policy);

MixedForest build_mixed_from_decisions(const std::vector<Decision>& decisions,
                                       const GridGeometry& geom, int d_max,
                                       const MergePolicy& merge);

MixedForest build_mixed(const MotionField& field, const Frame& reference,
                        const Frame& target, const GridGeometry& geom,
                        const PenaltyPolicy& policy, const MergePolicy& merge);

MixedForest build_unmerged_mixed(const std::vector<BlockMode>& modes,
                                 const GridGeometry& geom, int d_max = 7);

std::vector<BlockMode> flatten_mixed(const MixedForest& forest);

// Same traversal as the interframe coder. Nodes above min_block: `1` split,
// `00` terminal inter, `01` terminal intra; nodes at min_block: one bit
// (0 inter, 1 intra). The vector section holds 8-bit vectors for inter
// terminals only.
Bitstream encode_mixed(const MixedForest& forest, bool with_flag);

// Flag bit `0`, one decision bit per base block (row-major), then 8-bit
// vectors for the inter blocks in the same order.
Bitstream encode_mixed_flat(const MixedForest& forest);

MixedForest decode_mixed(const Bitstream& bits, const GridGeometry& geom, bool with_flag,
                         int d_max = 7);

// Decision-overhead accounting: flag + tree bits against one bit per base
// block.
CostReport mixed_cost_report(const MixedForest& forest, bool with_flag);

std::pair<CostReport, CostReport> mixed_theoretical_bounds(const GridGeometry& geom,
                                                           bool with_flag);

}  // namespace mvq
