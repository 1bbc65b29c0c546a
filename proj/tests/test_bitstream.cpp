#include <doctest.h>

#include "mvq/bitstream.hpp"

using namespace mvq;

TEST_CASE("writer packs MSB-first with zero padding") {
  BitWriter w;
  for (int b : {0, 0, 0, 0, 1, 1, 1, 1, 0}) w.put(b);
  const Bitstream bs = w.take();
  CHECK(bs.bit_count == 9);
  CHECK(bs.bytes == std::vector<uint8_t>{0x0F, 0x00});
}

TEST_CASE("reader inverts the writer") {
  BitWriter w;
  w.put_bits(0b101101u, 6);
  put_twos_complement(w, -2, 4);
  put_twos_complement(w, 7, 4);
  put_twos_complement(w, -8, 4);
  const Bitstream bs = w.take();

  BitReader r(bs);
  CHECK(r.get_bits(6) == 0b101101u);
  CHECK(get_twos_complement(r, 4) == -2);
  CHECK(get_twos_complement(r, 4) == 7);
  CHECK(get_twos_complement(r, 4) == -8);
  CHECK_NOTHROW(r.finish_padding());
}

TEST_CASE("reader reports exhaustion and bad padding") {
  BitWriter w;
  w.put_bits(0b01u, 2);
  const Bitstream bs = w.take();
  {
    BitReader r(bs);
    r.get_bits(2);
    CHECK_THROWS_WITH_AS(r.get(), doctest::Contains("exhausted"), Error);
  }
  {
    BitReader r(bs);
    r.get();  // one structural bit consumed, a '1' remains
    CHECK_THROWS_AS(r.finish_padding(), Error);
  }
  {
    Bitstream two = Bitstream::from_bytes({0x00, 0x00});
    BitReader r(two);
    r.get();
    CHECK_THROWS_WITH_AS(r.finish_padding(), doctest::Contains("trailing"), Error);
  }
}

TEST_CASE("two's complement range is enforced") {
  BitWriter w;
  CHECK_THROWS_AS(put_twos_complement(w, 8, 4), Error);
  CHECK_THROWS_AS(put_twos_complement(w, -9, 4), Error);
}
