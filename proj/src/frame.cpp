#include "mvq/frame.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

namespace mvq {

bool operator==(const Frame& a, const Frame& b) {
  return a.width == b.width && a.height == b.height && a.samples == b.samples;
}

bool operator==(const GridGeometry& a, const GridGeometry& b) {
  return a.width == b.width && a.height == b.height && a.min_block == b.min_block &&
         a.max_block == b.max_block;
}

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return tok;
  tok.push_back(char(c));
  while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') tok.push_back(char(c));
  if (c == '#') in.unget();
  return tok;
}

int parse_dim(const std::string& tok, const char* what) {
  if (tok.empty()) throw Error(std::string("malformed header: missing ") + what);
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(std::string("malformed header: bad ") + what + " '" + tok + "'");
  long v = std::stol(tok);
  if (v <= 0 || v > 1 << 20) throw Error(std::string("malformed header: bad ") + what);
  return int(v);
}

}  // namespace

int GridGeometry::levels() const {
  int n = 1;
  for (int s = min_block; s < max_block; s *= 2) ++n;
  return n;
}

void GridGeometry::check() const {
  if (width <= 0 || height <= 0) throw Error("degenerate geometry: non-positive dimensions");
  if (!is_pow2(min_block) || !is_pow2(max_block))
    throw Error("block sizes must be powers of two");
  if (min_block > max_block) throw Error("min_block exceeds max_block");
  if (width % max_block != 0 || height % max_block != 0)
    throw Error("frame dimensions must be multiples of max_block");
}

Frame load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");

  std::string magic = next_token(in);
  if (magic != "P5") throw Error("malformed header: not a binary PGM (P5)");
  int width = parse_dim(next_token(in), "width");
  int height = parse_dim(next_token(in), "height");
  std::string maxtok = next_token(in);
  if (maxtok.empty()) throw Error("malformed header: missing maxval");
  long maxval = std::stol(maxtok);
  if (maxval > 255) throw Error("unsupported sample depth (maxval > 255)");
  if (maxval <= 0) throw Error("malformed header: bad maxval");
  // next_token consumed exactly one whitespace byte after maxval

  Frame f;
  f.width = width;
  f.height = height;
  f.samples.resize(size_t(width) * height);
  in.read(reinterpret_cast<char*>(f.samples.data()), std::streamsize(f.samples.size()));
  if (size_t(in.gcount()) != f.samples.size()) throw Error("truncated pixel data");
  return f;
}

void store_pgm(const Frame& frame, const std::string& path) {
  if (frame.width <= 0 || frame.height <= 0) throw Error("degenerate geometry: empty frame");
  if (frame.samples.size() != size_t(frame.width) * frame.height)
    throw Error("frame sample count does not match its dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.samples.data()),
            std::streamsize(frame.samples.size()));
  if (!out) throw Error("I/O failure writing '" + path + "'");
}

Frame load_raw_y8(const std::string& path, int width, int height, int frame_index) {
  if (width <= 0 || height <= 0) throw Error("degenerate geometry: non-positive dimensions");
  if (frame_index < 0) throw Error("frame index out of range");
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error("cannot open '" + path + "'");
  const auto file_size = static_cast<unsigned long long>(in.tellg());
  const unsigned long long plane = (unsigned long long)(width) * height;
  if (file_size < plane * (frame_index + 1ull))
    throw Error("frame index out of range (short file)");

  Frame f;
  f.width = width;
  f.height = height;
  f.index = frame_index;
  f.samples.resize(plane);
  in.seekg(std::streamoff(plane * frame_index));
  in.read(reinterpret_cast<char*>(f.samples.data()), std::streamsize(plane));
  if (size_t(in.gcount()) != plane) throw Error("truncated pixel data");
  return f;
}

void validate_geometry(const Frame& frame, const GridGeometry& geom) {
  geom.check();
  if (frame.width != geom.width || frame.height != geom.height)
    throw Error("frame dimensions do not match the grid geometry");
  if (frame.samples.size() != size_t(frame.width) * frame.height)
    throw Error("frame sample count does not match its dimensions");
}

}  // namespace mvq
