#pragma once
#include <cstdint>
#include <vector>

#include "mvq/error.hpp"

namespace mvq {

// Bit sequence, MSB-first within each byte, zero-padded to a whole byte.
struct Bitstream {
  std::vector<uint8_t> bytes;
  size_t bit_count = 0;  // bits meaningful before padding

  size_t byte_count() const { return bytes.size(); }
  int bit(size_t i) const { return (bytes[i >> 3] >> (7 - (i & 7))) & 1; }

  static Bitstream from_bytes(std::vector<uint8_t> data);
};

bool operator==(const Bitstream& a, const Bitstream& b);
inline bool operator!=(const Bitstream& a, const Bitstream& b) { return !(a == b); }

class BitWriter {
 public:
  void put(int bit);
  void put_bits(uint32_t value, int nbits);  // MSB-first
  size_t bit_count() const { return bit_count_; }
  Bitstream take();

 private:
  std::vector<uint8_t> bytes_;
  size_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const Bitstream& bs) : bs_(bs) {}
  int get();
  uint32_t get_bits(int nbits);
  size_t consumed() const { return pos_; }
  size_t remaining() const { return bs_.bit_count - pos_; }
  // After a full decode: at most 7 bits may remain and all must be zero.
  void finish_padding();

 private:
  const Bitstream& bs_;
  size_t pos_ = 0;
};

// Fixed-width two's complement fields, MSB-first.
void put_twos_complement(BitWriter& w, int value, int nbits);
int get_twos_complement(BitReader& r, int nbits);

}  // namespace mvq
