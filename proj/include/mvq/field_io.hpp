#pragma once
#include <string>
#include <vector>

#include "mvq/inter_intra.hpp"
#include "mvq/motion.hpp"

namespace mvq {

// Line-based text formats.
//
//   mvfield <width> <height> <min_block> <d_max>
//   <dx> <dy>            one line per base block, row-major
//
//   mvdecisions <width> <height> <min_block> <d_max>
//   inter <dx> <dy> | intra

void save_field(const MotionField& field, const std::string& path);
MotionField load_field(const std::string& path, int max_block);

void save_modes(const std::vector<BlockMode>& modes, const GridGeometry& geom, int d_max,
                const std::string& path);
std::vector<BlockMode> load_modes(const std::string& path, GridGeometry& geom_out,
                                  int& d_max_out, int max_block);

}  // namespace mvq
