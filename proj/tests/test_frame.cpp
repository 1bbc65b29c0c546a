#include <doctest.h>

#include "mvq/frame.hpp"
#include "support/synthetic.hpp"
#include "test_util.hpp"

using namespace mvq;

TEST_CASE("pgm parses header and payload") {
  TempDir tmp;
  const std::string p = tmp.path("a.pgm");
  write_bytes(p, {'P', '5', '\n', '2', ' ', '2', '\n', '2', '5', '5', '\n', 0, 255, 128, 64});
  const Frame f = load_pgm(p);
  CHECK(f.width == 2);
  CHECK(f.height == 2);
  CHECK(f.samples == std::vector<uint8_t>{0, 255, 128, 64});
}

TEST_CASE("pgm accepts header comments") {
  TempDir tmp;
  const std::string p = tmp.path("c.pgm");
  write_bytes(p, {'P', '5', ' ', '#', 'x', '\n', '1', ' ', '1', '\n', '2', '5', '5', '\n', 7});
  CHECK(load_pgm(p).samples == std::vector<uint8_t>{7});
}

TEST_CASE("pgm rejects deep samples and truncation") {
  TempDir tmp;
  {
    const std::string p = tmp.path("deep.pgm");
    std::vector<unsigned char> data = {'P', '5', '\n', '1', ' ', '1', '\n',
                                       '6', '5', '5', '3', '5', '\n', 1, 1};
    write_bytes(p, data);
    CHECK_THROWS_WITH_AS(load_pgm(p), doctest::Contains("unsupported sample depth"), Error);
  }
  {
    const std::string p = tmp.path("short.pgm");
    write_bytes(p, {'P', '5', '\n', '2', ' ', '2', '\n', '2', '5', '5', '\n', 1, 2, 3});
    CHECK_THROWS_WITH_AS(load_pgm(p), doctest::Contains("truncated"), Error);
  }
  {
    const std::string p = tmp.path("bad.pgm");
    write_bytes(p, {'P', '6', '\n'});
    CHECK_THROWS_AS(load_pgm(p), Error);
  }
  CHECK_THROWS_AS(load_pgm(tmp.path("missing.pgm")), Error);
}

TEST_CASE("pgm round trip is the identity") {
  TempDir tmp;
  for (uint32_t seed : {1u, 2u, 3u}) {
    const Frame f = mvqtest::random_frame(17, 9, seed);
    const std::string p = tmp.path("rt.pgm");
    store_pgm(f, p);
    CHECK(load_pgm(p) == f);
  }
  const Frame one{1, 1, 0, {0}};
  store_pgm(one, tmp.path("one.pgm"));
  CHECK(load_pgm(tmp.path("one.pgm")) == one);
}

TEST_CASE("pgm store reports unwritable destinations") {
  const Frame f{1, 1, 0, {9}};
  CHECK_THROWS_AS(store_pgm(f, "/nonexistent-dir/x.pgm"), Error);
}

TEST_CASE("raw y8 plane addressing") {
  TempDir tmp;
  const std::string p = tmp.path("seq.y8");
  std::vector<unsigned char> data(32);
  for (int i = 0; i < 32; ++i) data[size_t(i)] = (unsigned char)(i);
  write_bytes(p, data);

  const Frame f1 = load_raw_y8(p, 4, 4, 1);
  CHECK(f1.index == 1);
  for (int i = 0; i < 16; ++i) CHECK(f1.samples[size_t(i)] == 16 + i);

  CHECK_THROWS_WITH_AS(load_raw_y8(p, 4, 4, 2), doctest::Contains("out of range"), Error);
  CHECK_THROWS_WITH_AS(load_raw_y8(p, 0, 4, 0), doctest::Contains("degenerate"), Error);
}

TEST_CASE("geometry validation") {
  Frame f;
  f.width = 256;
  f.height = 256;
  f.samples.assign(size_t(256) * 256, 0);

  GridGeometry g{256, 256, 16, 64};
  CHECK_NOTHROW(validate_geometry(f, g));
  CHECK(g.levels() == 3);
  CHECK(g.base_block_count() == 256);
  CHECK(g.roots_x() * g.roots_y() == 16);

  Frame half = f;
  half.height = 128;
  half.samples.resize(size_t(256) * 128);
  GridGeometry gh{256, 128, 16, 64};
  CHECK_NOTHROW(validate_geometry(half, gh));
  CHECK(gh.base_block_count() == 128);
  CHECK(gh.roots_x() * gh.roots_y() == 8);

  CHECK_THROWS_AS(validate_geometry(half, g), Error);           // dimension mismatch
  CHECK_THROWS_AS((GridGeometry{100, 100, 16, 64}).check(), Error);  // not a multiple
  CHECK_THROWS_AS((GridGeometry{256, 256, 12, 64}).check(), Error);  // not a power of two
  CHECK_THROWS_AS((GridGeometry{256, 256, 64, 16}).check(), Error);  // min > max
  CHECK_NOTHROW((GridGeometry{64, 64, 16, 16}).check());
}
