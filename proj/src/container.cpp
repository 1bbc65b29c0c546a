#include "mvq/container.hpp"

#include <fstream>

namespace mvq {

namespace {

void write_u16be(std::ostream& out, int v) {
  if (v < 0 || v > 0xFFFF) throw Error("value does not fit a 16-bit container field");
  out.put(char((v >> 8) & 0xFF));
  out.put(char(v & 0xFF));
}

int read_u16be(std::istream& in) {
  const int hi = in.get();
  const int lo = in.get();
  if (hi < 0 || lo < 0) throw Error("truncated container header");
  return (hi << 8) | lo;
}

}  // namespace

void save_container(const Container& c, const std::string& path) {
  c.geom.check();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write("MVQ1", 4);
  write_u16be(out, c.geom.width);
  write_u16be(out, c.geom.height);
  write_u16be(out, c.geom.min_block);
  write_u16be(out, c.geom.max_block);
  write_u16be(out, c.d_max);
  out.put(char(uint8_t(c.mode)));
  out.put(char(c.with_flag ? 1 : 0));
  out.write(reinterpret_cast<const char*>(c.payload.bytes.data()),
            std::streamsize(c.payload.bytes.size()));
  if (!out) throw Error("I/O failure writing '" + path + "'");
}

Container load_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");

  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "MVQ1")
    throw Error("not an MVQ1 container: '" + path + "'");

  Container c;
  c.geom.width = read_u16be(in);
  c.geom.height = read_u16be(in);
  c.geom.min_block = read_u16be(in);
  c.geom.max_block = read_u16be(in);
  c.d_max = read_u16be(in);
  const int mode = in.get();
  const int flag = in.get();
  if (mode < 0 || flag < 0) throw Error("truncated container header");
  if (mode > 2) throw Error("unknown container mode");
  if (flag > 1) throw Error("malformed container flag byte");
  c.mode = StreamMode(uint8_t(mode));
  c.with_flag = flag == 1;
  c.geom.check();

  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  c.payload = Bitstream::from_bytes(std::move(data));
  return c;
}

}  // namespace mvq
