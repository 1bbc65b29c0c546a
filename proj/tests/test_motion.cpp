#include <doctest.h>

#include "mvq/field_io.hpp"
#include "mvq/motion.hpp"
#include "support/synthetic.hpp"
#include "test_util.hpp"

using namespace mvq;
using namespace mvqtest;

TEST_CASE("block_mad evaluates the displaced difference") {
  Frame ref = random_frame(4, 4, 1);
  Frame tgt = ref;
  CHECK(block_mad(ref, tgt, 0, 0, 4, {0, 0}) == 0.0);

  ref.at(0, 0) = 10;
  ref.at(1, 0) = 20;
  ref.at(0, 1) = 30;
  ref.at(1, 1) = 40;
  tgt.at(1, 1) = 12;
  tgt.at(2, 1) = 18;
  tgt.at(1, 2) = 30;
  tgt.at(2, 2) = 44;
  CHECK(block_mad(ref, tgt, 0, 0, 2, {1, 1}) == doctest::Approx(2.0));

  CHECK_THROWS_AS(block_mad(ref, tgt, 2, 2, 2, {1, 1}), Error);  // pushed outside
}

TEST_CASE("full_search finds a pure shift and breaks ties") {
  const Frame ref = random_frame(64, 64, 7);
  const Frame tgt = shifted_frame(ref, 3, 0);
  SearchParams params;
  params.mode = SearchMode::FullSearch;

  const SearchResult r = full_search(ref, tgt, 24, 24, 16, params);
  CHECK(r.vec == MotionVector{3, 0});
  CHECK(r.mad == 0.0);

  // identical frames: every candidate ties at its own MAD, (0,0) wins
  const SearchResult id = full_search(ref, ref, 24, 24, 16, params);
  CHECK(id.vec == MotionVector{0, 0});
  CHECK(id.mad == 0.0);

  // constant frames: all candidates tie at zero
  Frame flat;
  flat.width = flat.height = 64;
  flat.samples.assign(size_t(64) * 64, 9);
  CHECK(full_search(flat, flat, 24, 24, 16, params).vec == MotionVector{0, 0});

  SearchParams frozen;
  frozen.d_max = 0;
  CHECK(full_search(ref, tgt, 24, 24, 16, frozen).vec == MotionVector{0, 0});
}

TEST_CASE("conjugate direction search matches the oracle on unimodal surfaces") {
  SearchParams params;

  struct Case {
    Frame ref;
    int sx, sy;
  };
  const Case cases[] = {
      {ramp_frame(64, 64, 2, 0), 3, 0},
      {ramp_frame(64, 64, 0, 3), 0, 2},
      {ramp_frame(64, 64, 1, 1), 2, 1},
  };
  for (const Case& c : cases) {
    const Frame tgt = shifted_frame(c.ref, c.sx, c.sy);
    const SearchResult cds = conjugate_direction_search(c.ref, tgt, 24, 24, 16, params);
    const SearchResult full = full_search(c.ref, tgt, 24, 24, 16, params);
    CHECK(cds.vec == full.vec);
    CHECK(cds.mad == doctest::Approx(full.mad));
  }
}

TEST_CASE("conjugate direction search never beats the exhaustive oracle") {
  SearchParams params;
  for (uint32_t seed = 0; seed < 20; ++seed) {
    const Frame ref = random_frame(64, 64, seed);
    const Frame tgt = random_frame(64, 64, seed ^ 0xabcdu);
    for (int by = 0; by < 4; ++by)
      for (int bx = 0; bx < 4; ++bx) {
        const SearchResult cds =
            conjugate_direction_search(ref, tgt, bx * 16, by * 16, 16, params);
        const SearchResult full = full_search(ref, tgt, bx * 16, by * 16, 16, params);
        CHECK(cds.mad >= full.mad - 1e-12);
        CHECK(cds.mad == doctest::Approx(block_mad(ref, tgt, bx * 16, by * 16, 16, cds.vec)));
      }
  }
}

TEST_CASE("estimate_field covers the grid deterministically") {
  const GridGeometry geom{64, 64, 16, 64};
  SearchParams params;
  params.mode = SearchMode::FullSearch;

  const Frame ref = random_frame(64, 64, 11);
  const MotionField zero = estimate_field(ref, ref, geom, params);
  CHECK(zero.vectors.size() == 16);
  for (const MotionVector& v : zero.vectors) CHECK(v == MotionVector{0, 0});

  const Frame tgt = shifted_frame(ref, 3, 0);
  const MotionField field = estimate_field(ref, tgt, geom, params);
  for (int by = 1; by <= 2; ++by)
    for (int bx = 1; bx <= 2; ++bx) CHECK(field.at(bx, by) == MotionVector{3, 0});

  CHECK(estimate_field(ref, tgt, geom, params) == field);

  for (const MotionVector& v : field.vectors) {
    CHECK(std::abs(v.dx) <= params.d_max);
    CHECK(std::abs(v.dy) <= params.d_max);
  }

  Frame other = random_frame(128, 64, 1);
  CHECK_THROWS_AS(estimate_field(ref, other, geom, params), Error);
}

TEST_CASE("a 256x256 grid at min 16 yields 256 vectors") {
  const GridGeometry geom{256, 256, 16, 64};
  const Frame ref = random_frame(256, 256, 3);
  const MotionField field = estimate_field(ref, ref, geom, SearchParams{});
  CHECK(field.vectors.size() == 256);
}

TEST_CASE("field text format round trips") {
  TempDir tmp;
  const GridGeometry geom{128, 64, 16, 64};
  const MotionField field = random_field_iid(geom, 7, 21);
  const std::string p = tmp.path("f.mvf");
  save_field(field, p);
  CHECK(load_field(p, geom.max_block) == field);

  write_bytes(tmp.path("bad.mvf"), {'x', '\n'});
  CHECK_THROWS_AS(load_field(tmp.path("bad.mvf"), 64), Error);
}
