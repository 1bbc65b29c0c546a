#include "mvq/bitstream.hpp"

namespace mvq {

Bitstream Bitstream::from_bytes(std::vector<uint8_t> data) {
  Bitstream bs;
  bs.bit_count = data.size() * 8;
  bs.bytes = std::move(data);
  return bs;
}

bool operator==(const Bitstream& a, const Bitstream& b) {
  return a.bit_count == b.bit_count && a.bytes == b.bytes;
}

void BitWriter::put(int bit) {
  const size_t byte = bit_count_ >> 3;
  if (byte == bytes_.size()) bytes_.push_back(0);
  if (bit) bytes_[byte] |= uint8_t(0x80u >> (bit_count_ & 7));
  ++bit_count_;
}

void BitWriter::put_bits(uint32_t value, int nbits) {
  for (int i = nbits - 1; i >= 0; --i) put((value >> i) & 1);
}

Bitstream BitWriter::take() {
  Bitstream bs;
  bs.bytes = std::move(bytes_);
  bs.bit_count = bit_count_;
  bytes_.clear();
  bit_count_ = 0;
  return bs;
}

int BitReader::get() {
  if (pos_ >= bs_.bit_count) throw Error("stream exhausted");
  return bs_.bit(pos_++);
}

uint32_t BitReader::get_bits(int nbits) {
  uint32_t v = 0;
  for (int i = 0; i < nbits; ++i) v = (v << 1) | uint32_t(get());
  return v;
}

void BitReader::finish_padding() {
  if (remaining() >= 8) throw Error("trailing data after stream");
  while (remaining() > 0)
    if (get() != 0) throw Error("non-zero padding bits");
}

void put_twos_complement(BitWriter& w, int value, int nbits) {
  const int lo = -(1 << (nbits - 1));
  const int hi = (1 << (nbits - 1)) - 1;
  if (value < lo || value > hi) throw Error("vector component out of coded range");
  w.put_bits(uint32_t(value) & ((1u << nbits) - 1), nbits);
}

int get_twos_complement(BitReader& r, int nbits) {
  int v = int(r.get_bits(nbits));
  if (v >= (1 << (nbits - 1))) v -= 1 << nbits;
  return v;
}

}  // namespace mvq
