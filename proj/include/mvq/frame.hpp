#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mvq/error.hpp"

namespace mvq {

// 8-bit luminance raster. `index` records the position in the source
// sequence; it is metadata and takes no part in equality.
struct Frame {
  int width = 0;
  int height = 0;
  int index = 0;
  std::vector<uint8_t> samples;  // row-major, width * height

  uint8_t at(int x, int y) const { return samples[size_t(y) * width + x]; }
  uint8_t& at(int x, int y) { return samples[size_t(y) * width + x]; }

  bool contains_block(int x, int y, int size) const {
    return x >= 0 && y >= 0 && x + size <= width && y + size <= height;
  }
};

bool operator==(const Frame& a, const Frame& b);
inline bool operator!=(const Frame& a, const Frame& b) { return !(a == b); }

// Regular block grid: power-of-two block sides from min_block up to
// max_block, frame dimensions exact multiples of max_block.
struct GridGeometry {
  int width = 0;
  int height = 0;
  int min_block = 16;
  int max_block = 64;

  int levels() const;  // log2(max_block / min_block) + 1
  int blocks_x() const { return width / min_block; }
  int blocks_y() const { return height / min_block; }
  long base_block_count() const { return long(blocks_x()) * blocks_y(); }
  int roots_x() const { return width / max_block; }
  int roots_y() const { return height / max_block; }

  void check() const;  // throws Error when an invariant fails
};

bool operator==(const GridGeometry& a, const GridGeometry& b);
inline bool operator!=(const GridGeometry& a, const GridGeometry& b) { return !(a == b); }

// Binary PGM (P5), maxval <= 255.
Frame load_pgm(const std::string& path);
void store_pgm(const Frame& frame, const std::string& path);

// Headerless concatenated Y planes; geometry supplied by the caller.
Frame load_raw_y8(const std::string& path, int width, int height, int frame_index);

// Succeeds iff the frame tiles exactly into the grid.
void validate_geometry(const Frame& frame, const GridGeometry& geom);

}  // namespace mvq
