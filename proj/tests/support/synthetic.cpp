#include "support/synthetic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mvqtest {

using namespace mvq;

namespace {

// Small distinct vectors keyed by the child position inside a sibling
// group, so no four siblings can ever merge.
constexpr MotionVector kPalette[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int rand_int(std::mt19937& rng, int lo, int hi) {
  return lo + int(rng() % uint32_t(hi - lo + 1));
}

// Deterministic Fisher-Yates (independent of stdlib shuffle internals).
void shuffle_ids(std::vector<long>& ids, std::mt19937& rng) {
  for (size_t i = ids.size(); i > 1; --i)
    std::swap(ids[i - 1], ids[rng() % uint32_t(i)]);
}

}  // namespace

QuadForest forest_with_terminal_counts(const GridGeometry& geom,
                                       const std::map<int, long>& counts, uint32_t seed) {
  geom.check();
  const int levels = geom.levels();
  std::mt19937 rng(seed);

  // BFS level tables, top (max_block) downward: terminal flags and the
  // split rank used to address children on the next level.
  std::vector<std::vector<char>> term(levels);
  std::vector<std::vector<long>> split_rank(levels);
  long avail = long(geom.roots_x()) * geom.roots_y();
  for (int k = 0; k < levels; ++k) {
    const int side = geom.max_block >> k;
    const auto it = counts.find(side);
    const long want = it == counts.end() ? 0 : it->second;
    if (k == levels - 1 && want != avail)
      throw std::logic_error("composition does not cover the grid");
    if (want > avail) throw std::logic_error("composition exceeds available nodes");

    term[k].assign(size_t(avail), 0);
    std::vector<long> ids(static_cast<size_t>(avail), 0);
    std::iota(ids.begin(), ids.end(), 0);
    shuffle_ids(ids, rng);
    for (long i = 0; i < want; ++i) term[k][size_t(ids[size_t(i)])] = 1;

    split_rank[k].assign(size_t(avail), 0);
    long rank = 0;
    for (long i = 0; i < avail; ++i) {
      split_rank[k][size_t(i)] = rank;
      if (!term[k][size_t(i)]) ++rank;
    }
    avail = rank * 4;
  }
  if (avail != 0) throw std::logic_error("composition does not cover the grid");

  QuadForest out;
  out.geom = geom;

  std::function<uint32_t(int, long)> emit = [&](int k, long bfs) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    if (k == levels - 1 || term[k][size_t(bfs)]) {
      out.nodes[idx].vec = kPalette[bfs % 4];
      return idx;
    }
    out.nodes[idx].split = true;
    for (int j = 0; j < 4; ++j) {
      const uint32_t c = emit(k + 1, split_rank[k][size_t(bfs)] * 4 + j);
      out.nodes[idx].child[j] = c;
    }
    return idx;
  };

  const long roots = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < roots; ++i) out.roots.push_back(emit(0, i));
  return out;
}

MotionField field_with_terminal_counts(const GridGeometry& geom,
                                       const std::map<int, long>& counts, uint32_t seed) {
  return flatten(forest_with_terminal_counts(geom, counts, seed));
}

MotionField random_field_iid(const GridGeometry& geom, int d_max, uint32_t seed) {
  geom.check();
  std::mt19937 rng(seed);
  MotionField f;
  f.geom = geom;
  f.d_max = d_max;
  f.vectors.resize(size_t(geom.base_block_count()));
  for (MotionVector& v : f.vectors) {
    v.dx = rand_int(rng, -d_max, d_max);
    v.dy = rand_int(rng, -d_max, d_max);
  }
  return f;
}

MotionField random_field_clustered(const GridGeometry& geom, int d_max, uint32_t seed) {
  return flatten(random_forest(geom, d_max, seed));
}

MotionField random_field_smooth(const GridGeometry& geom, int d_max, uint32_t seed) {
  geom.check();
  std::mt19937 rng(seed);
  MotionField f;
  f.geom = geom;
  f.d_max = d_max;
  f.vectors.resize(size_t(geom.base_block_count()));
  const int bw = geom.blocks_x();
  const int bh = geom.blocks_y();
  for (int by = 0; by < bh; ++by)
    for (int bx = 0; bx < bw; ++bx) {
      MotionVector v;
      const int r = rand_int(rng, 0, 9);
      if (bx > 0 && r < 5)
        v = f.at(bx - 1, by);
      else if (by > 0 && r < 8)
        v = f.at(bx, by - 1);
      else {
        v.dx = rand_int(rng, -d_max, d_max);
        v.dy = rand_int(rng, -d_max, d_max);
      }
      f.at(bx, by) = v;
    }
  return f;
}

QuadForest random_forest(const GridGeometry& geom, int d_max, uint32_t seed) {
  geom.check();
  std::mt19937 rng(seed);
  QuadForest out;
  out.geom = geom;
  out.d_max = d_max;

  std::function<uint32_t(int)> emit = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    if (size > geom.min_block && rand_int(rng, 0, 99) < 55) {
      out.nodes[idx].split = true;
      for (int j = 0; j < 4; ++j) {
        const uint32_t c = emit(size / 2);
        out.nodes[idx].child[j] = c;
      }
      return idx;
    }
    out.nodes[idx].vec = {rand_int(rng, -d_max, d_max), rand_int(rng, -d_max, d_max)};
    return idx;
  };

  const long roots = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < roots; ++i) out.roots.push_back(emit(geom.max_block));
  return out;
}

MixedForest random_mixed_forest(const GridGeometry& geom, int d_max, uint32_t seed) {
  geom.check();
  std::mt19937 rng(seed);
  MixedForest out;
  out.geom = geom;
  out.d_max = d_max;

  std::function<uint32_t(int)> emit = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(MixedNode{});
    if (size > geom.min_block && rand_int(rng, 0, 99) < 55) {
      out.nodes[idx].kind = MixedKind::Split;
      for (int j = 0; j < 4; ++j) {
        const uint32_t c = emit(size / 2);
        out.nodes[idx].child[j] = c;
      }
      return idx;
    }
    if (rand_int(rng, 0, 99) < 70) {
      out.nodes[idx].kind = MixedKind::Inter;
      out.nodes[idx].vec = {rand_int(rng, -d_max, d_max), rand_int(rng, -d_max, d_max)};
    } else {
      out.nodes[idx].kind = MixedKind::Intra;
    }
    return idx;
  };

  const long roots = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < roots; ++i) out.roots.push_back(emit(geom.max_block));
  return out;
}

std::vector<BlockMode> random_modes(const GridGeometry& geom, int d_max, uint32_t seed) {
  geom.check();
  std::mt19937 rng(seed);
  std::vector<BlockMode> modes(size_t(geom.base_block_count()));
  for (BlockMode& m : modes) {
    if (rand_int(rng, 0, 99) < 60) {
      m.kind = PredictorKind::Inter;
      m.vec = {rand_int(rng, -d_max, d_max), rand_int(rng, -d_max, d_max)};
    } else {
      m.kind = PredictorKind::Intra;
    }
  }
  return modes;
}

FieldPair constant_pair(const GridGeometry& geom, MotionVector v) {
  geom.check();
  FieldPair p;
  for (MotionField* f : {&p.earlier, &p.later}) {
    f->geom = geom;
    f->vectors.assign(size_t(geom.base_block_count()), v);
  }
  return p;
}

FieldPair correlated_pair(const GridGeometry& geom, int d_max, uint32_t seed) {
  FieldPair p;
  p.earlier = random_field_smooth(geom, d_max, seed);
  p.later = p.earlier;
  std::mt19937 rng(seed ^ 0x9e3779b9u);
  // sparse temporal changes
  const size_t changes = p.later.vectors.size() / 16 + 1;
  for (size_t i = 0; i < changes; ++i) {
    const size_t at = rng() % p.later.vectors.size();
    p.later.vectors[at] = {rand_int(rng, -d_max, d_max), rand_int(rng, -d_max, d_max)};
  }
  return p;
}

FieldPair uncorrelated_pair(const GridGeometry& geom, int d_max, uint32_t seed) {
  FieldPair p;
  p.earlier = random_field_iid(geom, d_max, seed);
  p.later = random_field_iid(geom, d_max, seed ^ 0x85ebca6bu);
  std::mt19937 rng(seed ^ 0xc2b2ae35u);
  for (size_t i = 0; i < p.later.vectors.size(); ++i)
    while (p.later.vectors[i] == p.earlier.vectors[i])
      p.later.vectors[i] = {rand_int(rng, -d_max, d_max), rand_int(rng, -d_max, d_max)};
  return p;
}

Frame random_frame(int width, int height, uint32_t seed) {
  std::mt19937 rng(seed);
  Frame f;
  f.width = width;
  f.height = height;
  f.samples.resize(size_t(width) * height);
  for (uint8_t& s : f.samples) s = uint8_t(rng() & 0xFF);
  return f;
}

Frame shifted_frame(const Frame& source, int sx, int sy) {
  Frame out = source;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      const int u = std::clamp(x - sx, 0, source.width - 1);
      const int v = std::clamp(y - sy, 0, source.height - 1);
      out.at(x, y) = source.at(u, v);
    }
  return out;
}

Frame ramp_frame(int width, int height, int x_slope, int y_slope) {
  Frame f;
  f.width = width;
  f.height = height;
  f.samples.resize(size_t(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      f.at(x, y) = uint8_t(std::clamp(x_slope * x + y_slope * y, 0, 255));
  return f;
}

}  // namespace mvqtest
