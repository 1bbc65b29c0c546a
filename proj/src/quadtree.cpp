#include "mvq/quadtree.hpp"

#include <functional>

#include "vector_stats.hpp"

namespace mvq {

using detail::VecStats;

namespace {

void check_field(const MotionField& field, const GridGeometry& geom) {
  geom.check();
  if (field.geom != geom) throw Error("motion field does not match the grid geometry");
  if (field.vectors.size() != size_t(geom.base_block_count()))
    throw Error("motion field vector count does not match the grid");
}

bool node_equal(const QuadForest& a, uint32_t ai, const QuadForest& b, uint32_t bi) {
  const QuadNode& na = a.nodes[ai];
  const QuadNode& nb = b.nodes[bi];
  if (na.split != nb.split) return false;
  if (!na.split) return na.vec == nb.vec;
  for (int i = 0; i < 4; ++i)
    if (!node_equal(a, na.child[i], b, nb.child[i])) return false;
  return true;
}

// Per-level merge state used by the bottom-up construction.
struct Cell {
  bool merged = false;
  MotionVector rep{};
  VecStats covered{};
};

}  // namespace

bool forest_equal(const QuadForest& a, const QuadForest& b) {
  if (a.geom != b.geom || a.roots.size() != b.roots.size()) return false;
  for (size_t i = 0; i < a.roots.size(); ++i)
    if (!node_equal(a, a.roots[i], b, b.roots[i])) return false;
  return true;
}

QuadForest build_bottom_up(const MotionField& field, const GridGeometry& geom,
                           const MergePolicy& policy) {
  check_field(field, geom);
  const int levels = geom.levels();

  // levels_state[k] holds the (bw>>k) x (bh>>k) grid of intermediate cells.
  std::vector<std::vector<Cell>> levels_state(levels);
  const int bw = geom.blocks_x();
  const int bh = geom.blocks_y();
  levels_state[0].resize(size_t(bw) * bh);
  for (int by = 0; by < bh; ++by)
    for (int bx = 0; bx < bw; ++bx) {
      Cell& c = levels_state[0][size_t(by) * bw + bx];
      c.merged = true;
      c.rep = field.at(bx, by);
      c.covered = VecStats::of(c.rep);
    }

  for (int k = 1; k < levels; ++k) {
    const int w = bw >> k;
    const int h = bh >> k;
    const int cw = bw >> (k - 1);
    levels_state[k].resize(size_t(w) * h);
    for (int cy = 0; cy < h; ++cy) {
      for (int cx = 0; cx < w; ++cx) {
        const Cell* ch[4] = {
            &levels_state[k - 1][size_t(2 * cy) * cw + 2 * cx],
            &levels_state[k - 1][size_t(2 * cy) * cw + 2 * cx + 1],
            &levels_state[k - 1][size_t(2 * cy + 1) * cw + 2 * cx],
            &levels_state[k - 1][size_t(2 * cy + 1) * cw + 2 * cx + 1],
        };
        Cell& c = levels_state[k][size_t(cy) * w + cx];
        for (const Cell* s : ch) c.covered.add(s->covered);
        if (ch[0]->merged && ch[1]->merged && ch[2]->merged && ch[3]->merged) {
          const MotionVector reps[4] = {ch[0]->rep, ch[1]->rep, ch[2]->rep, ch[3]->rep};
          c.merged = detail::merge_group(policy, reps, 4, c.covered, field.d_max, c.rep);
        }
      }
    }
  }

  QuadForest out;
  out.geom = geom;
  out.d_max = field.d_max;

  // Materialize in preorder from the roots.
  std::function<uint32_t(int, int, int)> emit = [&](int k, int cx, int cy) -> uint32_t {
    const int w = bw >> k;
    const Cell& c = levels_state[k][size_t(cy) * w + cx];
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    if (k == 0 || c.merged) {
      out.nodes[idx].vec = c.rep;
      return idx;
    }
    out.nodes[idx].split = true;
    out.nodes[idx].child[0] = emit(k - 1, 2 * cx, 2 * cy);
    out.nodes[idx].child[1] = emit(k - 1, 2 * cx + 1, 2 * cy);
    out.nodes[idx].child[2] = emit(k - 1, 2 * cx, 2 * cy + 1);
    out.nodes[idx].child[3] = emit(k - 1, 2 * cx + 1, 2 * cy + 1);
    return idx;
  };

  for (int ry = 0; ry < geom.roots_y(); ++ry)
    for (int rx = 0; rx < geom.roots_x(); ++rx)
      out.roots.push_back(emit(levels - 1, rx, ry));
  return out;
}

QuadForest build_top_down(const MotionField& field, const GridGeometry& geom) {
  check_field(field, geom);

  QuadForest out;
  out.geom = geom;
  out.d_max = field.d_max;

  // Uniformity over the covered base blocks decides split vs terminal.
  auto uniform = [&](int bx0, int by0, int side_blocks, MotionVector& common) {
    common = field.at(bx0, by0);
    for (int y = 0; y < side_blocks; ++y)
      for (int x = 0; x < side_blocks; ++x)
        if (field.at(bx0 + x, by0 + y) != common) return false;
    return true;
  };

  std::function<uint32_t(int, int, int)> emit = [&](int bx0, int by0,
                                                    int side_blocks) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    MotionVector common;
    if (side_blocks == 1 || uniform(bx0, by0, side_blocks, common)) {
      out.nodes[idx].vec = side_blocks == 1 ? field.at(bx0, by0) : common;
      return idx;
    }
    out.nodes[idx].split = true;
    const int half = side_blocks / 2;
    out.nodes[idx].child[0] = emit(bx0, by0, half);
    out.nodes[idx].child[1] = emit(bx0 + half, by0, half);
    out.nodes[idx].child[2] = emit(bx0, by0 + half, half);
    out.nodes[idx].child[3] = emit(bx0 + half, by0 + half, half);
    return idx;
  };

  const int root_blocks = geom.max_block / geom.min_block;
  for (int ry = 0; ry < geom.roots_y(); ++ry)
    for (int rx = 0; rx < geom.roots_x(); ++rx)
      out.roots.push_back(emit(rx * root_blocks, ry * root_blocks, root_blocks));
  return out;
}

QuadForest build_unmerged(const MotionField& field) {
  check_field(field, field.geom);
  const GridGeometry& geom = field.geom;

  QuadForest out;
  out.geom = geom;
  out.d_max = field.d_max;

  std::function<uint32_t(int, int, int)> emit = [&](int bx0, int by0,
                                                    int side_blocks) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    if (side_blocks == 1) {
      out.nodes[idx].vec = field.at(bx0, by0);
      return idx;
    }
    out.nodes[idx].split = true;
    const int half = side_blocks / 2;
    out.nodes[idx].child[0] = emit(bx0, by0, half);
    out.nodes[idx].child[1] = emit(bx0 + half, by0, half);
    out.nodes[idx].child[2] = emit(bx0, by0 + half, half);
    out.nodes[idx].child[3] = emit(bx0 + half, by0 + half, half);
    return idx;
  };

  const int root_blocks = geom.max_block / geom.min_block;
  for (int ry = 0; ry < geom.roots_y(); ++ry)
    for (int rx = 0; rx < geom.roots_x(); ++rx)
      out.roots.push_back(emit(rx * root_blocks, ry * root_blocks, root_blocks));
  return out;
}

MotionField flatten(const QuadForest& forest) {
  forest.geom.check();
  MotionField field;
  field.geom = forest.geom;
  field.d_max = forest.d_max;
  field.vectors.resize(size_t(forest.geom.base_block_count()));

  std::function<void(uint32_t, int, int, int)> fill = [&](uint32_t idx, int bx0, int by0,
                                                          int side_blocks) {
    const QuadNode& n = forest.nodes[idx];
    if (!n.split) {
      for (int y = 0; y < side_blocks; ++y)
        for (int x = 0; x < side_blocks; ++x) field.at(bx0 + x, by0 + y) = n.vec;
      return;
    }
    const int half = side_blocks / 2;
    fill(n.child[0], bx0, by0, half);
    fill(n.child[1], bx0 + half, by0, half);
    fill(n.child[2], bx0, by0 + half, half);
    fill(n.child[3], bx0 + half, by0 + half, half);
  };

  const int root_blocks = forest.geom.max_block / forest.geom.min_block;
  size_t r = 0;
  for (int ry = 0; ry < forest.geom.roots_y(); ++ry)
    for (int rx = 0; rx < forest.geom.roots_x(); ++rx)
      fill(forest.roots[r++], rx * root_blocks, ry * root_blocks, root_blocks);
  return field;
}

namespace {

void emit_tree(const QuadForest& f, uint32_t idx, int size, BitWriter& w,
               std::vector<uint32_t>& terminals) {
  const QuadNode& n = f.nodes[idx];
  if (size == f.geom.min_block) {
    if (n.split) throw Error("split below the minimum block size");
    terminals.push_back(idx);  // last level carries no tree bit
    return;
  }
  if (n.split) {
    w.put(1);
    for (int i = 0; i < 4; ++i) emit_tree(f, n.child[i], size / 2, w, terminals);
  } else {
    w.put(0);
    terminals.push_back(idx);
  }
}

}  // namespace

Bitstream encode_interframe(const QuadForest& forest, bool with_flag) {
  forest.geom.check();
  BitWriter w;
  if (with_flag) w.put(1);
  std::vector<uint32_t> terminals;
  for (uint32_t root : forest.roots) emit_tree(forest, root, forest.geom.max_block, w, terminals);
  for (uint32_t idx : terminals) {
    put_twos_complement(w, forest.nodes[idx].vec.dx, 4);
    put_twos_complement(w, forest.nodes[idx].vec.dy, 4);
  }
  return w.take();
}

Bitstream encode_interframe_flat(const MotionField& field) {
  check_field(field, field.geom);
  BitWriter w;
  w.put(0);  // quadtree coding not in use
  for (const MotionVector& v : field.vectors) {
    put_twos_complement(w, v.dx, 4);
    put_twos_complement(w, v.dy, 4);
  }
  return w.take();
}

QuadForest decode_interframe(const Bitstream& bits, const GridGeometry& geom,
                             bool with_flag, int d_max) {
  geom.check();
  BitReader r(bits);

  if (with_flag && r.get() == 0) {
    // Flat fallback: one vector per base block, no tree.
    MotionField field;
    field.geom = geom;
    field.d_max = d_max;
    field.vectors.resize(size_t(geom.base_block_count()));
    for (MotionVector& v : field.vectors) {
      v.dx = get_twos_complement(r, 4);
      v.dy = get_twos_complement(r, 4);
    }
    r.finish_padding();
    return build_unmerged(field);
  }

  QuadForest out;
  out.geom = geom;
  out.d_max = d_max;
  std::vector<uint32_t> terminals;

  std::function<uint32_t(int)> parse = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(QuadNode{});
    if (size == geom.min_block || r.get() == 0) {
      terminals.push_back(idx);
      return idx;
    }
    out.nodes[idx].split = true;
    for (int i = 0; i < 4; ++i) {
      const uint32_t c = parse(size / 2);
      out.nodes[idx].child[i] = c;
    }
    return idx;
  };

  const long root_count = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < root_count; ++i) out.roots.push_back(parse(geom.max_block));
  for (uint32_t idx : terminals) {
    out.nodes[idx].vec.dx = get_twos_complement(r, 4);
    out.nodes[idx].vec.dy = get_twos_complement(r, 4);
  }
  r.finish_padding();
  return out;
}

namespace {

void tally(const QuadForest& f, uint32_t idx, int size, CostReport& rep) {
  const QuadNode& n = f.nodes[idx];
  if (size > f.geom.min_block) ++rep.tree_bits;
  if (!n.split) {
    ++rep.counts_per_size[size];
    ++rep.vector_bytes;
    return;
  }
  for (int i = 0; i < 4; ++i) tally(f, n.child[i], size / 2, rep);
}

}  // namespace

CostReport cost_report(const QuadForest& forest, bool with_flag) {
  CostReport rep;
  rep.min_block = forest.geom.min_block;
  rep.flag_bits = with_flag ? 1 : 0;
  for (uint32_t root : forest.roots) tally(forest, root, forest.geom.max_block, rep);
  rep.total_bytes = (rep.total_bits() + 7) / 8;
  rep.baseline_bytes = forest.geom.base_block_count();
  rep.ratio_percent = 100.0 * double(rep.total_bytes) / double(rep.baseline_bytes);
  return rep;
}

std::pair<CostReport, CostReport> theoretical_bounds(const GridGeometry& geom,
                                                     bool with_flag) {
  geom.check();

  QuadForest best;
  best.geom = geom;
  const long root_count = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < root_count; ++i) {
    best.roots.push_back(uint32_t(best.nodes.size()));
    best.nodes.push_back(QuadNode{});
  }

  MotionField zero;
  zero.geom = geom;
  zero.vectors.resize(size_t(geom.base_block_count()));
  const QuadForest worst = build_unmerged(zero);

  return {cost_report(best, with_flag), cost_report(worst, with_flag)};
}

}  // namespace mvq
