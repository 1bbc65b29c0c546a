#pragma once
#include "mvq/motion.hpp"

namespace mvq {

// Outcome of the block writing pass. `coverage` marks pixels written at
// least once; holes are counted before any filling.
struct Prediction {
  Frame predicted;
  std::vector<uint8_t> coverage;
  long overlap_count = 0;
  long hole_count = 0;
};

// Writes every reference base block to its displaced address, in row-major
// block order; later writes win, out-of-frame pixels are clipped.
Prediction write_prediction(const Frame& reference, const MotionField& field);

// Uncovered pixels take the co-located reference pixel.
Frame fill_holes(const Prediction& pred, const Frame& reference);

double frame_mad(const Frame& a, const Frame& b);

}  // namespace mvq
