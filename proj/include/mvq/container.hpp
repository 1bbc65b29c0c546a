#pragma once
#include <string>

#include "mvq/bitstream.hpp"
#include "mvq/frame.hpp"

namespace mvq {

enum class StreamMode : uint8_t { Interframe = 0, Mixed = 1, Temporal3D = 2 };

// Container file: magic "MVQ1"; width, height, min_block, max_block and
// d_max as unsigned 16-bit big-endian; mode and flag as single bytes; the
// bare bitstream to end of file.
struct Container {
  GridGeometry geom;
  int d_max = 7;
  StreamMode mode = StreamMode::Interframe;
  bool with_flag = false;
  Bitstream payload;
};

void save_container(const Container& c, const std::string& path);
Container load_container(const std::string& path);

}  // namespace mvq
