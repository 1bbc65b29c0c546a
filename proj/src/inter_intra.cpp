#include "mvq/inter_intra.hpp"

#include <cmath>
#include <functional>

#include "vector_stats.hpp"

namespace mvq {

using detail::VecStats;

void PenaltyPolicy::check() const {
  if (!(base_p > 1.0)) throw Error("penalty must be greater than 1");
  if (!(neighbor_bias >= 1.0)) throw Error("neighbor bias must be at least 1");
}

namespace {

bool node_equal(const MixedForest& a, uint32_t ai, const MixedForest& b, uint32_t bi) {
  const MixedNode& na = a.nodes[ai];
  const MixedNode& nb = b.nodes[bi];
  if (na.kind != nb.kind) return false;
  if (na.kind == MixedKind::Inter) return na.vec == nb.vec;
  if (na.kind == MixedKind::Intra) return true;
  for (int i = 0; i < 4; ++i)
    if (!node_equal(a, na.child[i], b, nb.child[i])) return false;
  return true;
}

struct Cell {
  bool merged = false;
  PredictorKind kind = PredictorKind::Inter;
  MotionVector rep{};
  VecStats covered{};  // inter vectors only
};

}  // namespace

bool mixed_forest_equal(const MixedForest& a, const MixedForest& b) {
  if (a.geom != b.geom || a.roots.size() != b.roots.size()) return false;
  for (size_t i = 0; i < a.roots.size(); ++i)
    if (!node_equal(a, a.roots[i], b, b.roots[i])) return false;
  return true;
}

double intra_error_dc(const Frame& target, int origin_x, int origin_y, int size) {
  if (size <= 0) throw Error("degenerate geometry: non-positive block size");
  if (!target.contains_block(origin_x, origin_y, size))
    throw Error("block outside the frame");
  const long area = long(size) * size;
  long sum = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) sum += target.at(origin_x + x, origin_y + y);
  const long mean = (sum + area / 2) / area;  // rounded half-up
  long long sad = 0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const long d = target.at(origin_x + x, origin_y + y) - mean;
      sad += d >= 0 ? d : -d;
    }
  return double(sad) / double(area);
}

PredictorKind decide_block(double inter_error, double intra_error, double penalty) {
  if (!(penalty > 1.0)) throw Error("penalty must be greater than 1");
  if (inter_error < 0 || intra_error < 0) throw Error("negative prediction error");
  return inter_error < penalty * intra_error ? PredictorKind::Inter : PredictorKind::Intra;
}

double effective_penalty(const PenaltyPolicy& policy,
                         const std::vector<PredictorKind>& decided_siblings) {
  policy.check();
  if (!policy.adaptive || decided_siblings.empty()) return policy.base_p;
  bool all_inter = true;
  bool all_intra = true;
  for (PredictorKind k : decided_siblings) {
    all_inter = all_inter && k == PredictorKind::Inter;
    all_intra = all_intra && k == PredictorKind::Intra;
  }
  if (all_inter) return policy.base_p * policy.neighbor_bias;
  if (all_intra)
    return std::max(policy.base_p / policy.neighbor_bias, std::nextafter(1.0, 2.0));
  return policy.base_p;
}

std::vector<Decision> decide_blocks(const MotionField& field, const Frame& reference,
                                    const Frame& target, const GridGeometry& geom,
                                    const PenaltyPolicy& policy) {
  policy.check();
  validate_geometry(reference, geom);
  validate_geometry(target, geom);
  if (field.geom != geom) throw Error("motion field does not match the grid geometry");
  if (field.vectors.size() != size_t(geom.base_block_count()))
    throw Error("motion field vector count does not match the grid");

  const int bw = geom.blocks_x();
  const int bh = geom.blocks_y();
  const int bs = geom.min_block;
  std::vector<Decision> out(size_t(bw) * bh);

  auto decide_one = [&](int bx, int by, const std::vector<PredictorKind>& siblings) {
    const MotionVector v = field.at(bx, by);
    Decision d;
    d.vec = v;
    d.inter_error = block_mad(reference, target, bx * bs, by * bs, bs, v);
    d.intra_error = intra_error_dc(target, bx * bs, by * bs, bs);
    d.kind = decide_block(d.inter_error, d.intra_error, effective_penalty(policy, siblings));
    out[size_t(by) * bw + bx] = d;
  };

  if (geom.levels() == 1) {
    // single-level grid: no sibling groups exist
    for (int by = 0; by < bh; ++by)
      for (int bx = 0; bx < bw; ++bx) decide_one(bx, by, {});
    return out;
  }

  for (int qy = 0; qy < bh; qy += 2) {
    for (int qx = 0; qx < bw; qx += 2) {
      std::vector<PredictorKind> decided;
      for (int i = 0; i < 4; ++i) {
        const int bx = qx + (i & 1);
        const int by = qy + (i >> 1);
        decide_one(bx, by, decided);
        decided.push_back(out[size_t(by) * bw + bx].kind);
      }
    }
  }
  return out;
}

MixedForest build_mixed_from_decisions(const std::vector<Decision>& decisions,
                                       const GridGeometry& geom, int d_max,
                                       const MergePolicy& merge) {
  geom.check();
  if (decisions.size() != size_t(geom.base_block_count()))
    throw Error("decision count does not match the grid");

  const int levels = geom.levels();
  const int bw = geom.blocks_x();
  const int bh = geom.blocks_y();
  std::vector<std::vector<Cell>> state(levels);
  state[0].resize(size_t(bw) * bh);
  for (int by = 0; by < bh; ++by)
    for (int bx = 0; bx < bw; ++bx) {
      const Decision& d = decisions[size_t(by) * bw + bx];
      Cell& c = state[0][size_t(by) * bw + bx];
      c.merged = true;
      c.kind = d.kind;
      if (d.kind == PredictorKind::Inter) {
        c.rep = d.vec;
        c.covered = VecStats::of(d.vec);
      }
    }

  for (int k = 1; k < levels; ++k) {
    const int w = bw >> k;
    const int h = bh >> k;
    const int cw = bw >> (k - 1);
    state[k].resize(size_t(w) * h);
    for (int cy = 0; cy < h; ++cy) {
      for (int cx = 0; cx < w; ++cx) {
        const Cell* ch[4] = {
            &state[k - 1][size_t(2 * cy) * cw + 2 * cx],
            &state[k - 1][size_t(2 * cy) * cw + 2 * cx + 1],
            &state[k - 1][size_t(2 * cy + 1) * cw + 2 * cx],
            &state[k - 1][size_t(2 * cy + 1) * cw + 2 * cx + 1],
        };
        Cell& c = state[k][size_t(cy) * w + cx];
        for (const Cell* s : ch) c.covered.add(s->covered);
        const bool all_terminal =
            ch[0]->merged && ch[1]->merged && ch[2]->merged && ch[3]->merged;
        const bool same_kind = all_terminal && ch[0]->kind == ch[1]->kind &&
                               ch[0]->kind == ch[2]->kind && ch[0]->kind == ch[3]->kind;
        if (!same_kind) continue;
        c.kind = ch[0]->kind;
        if (c.kind == PredictorKind::Intra) {
          c.merged = true;
          continue;
        }
        const MotionVector reps[4] = {ch[0]->rep, ch[1]->rep, ch[2]->rep, ch[3]->rep};
        c.merged = detail::merge_group(merge, reps, 4, c.covered, d_max, c.rep);
      }
    }
  }

  MixedForest out;
  out.geom = geom;
  out.d_max = d_max;

  std::function<uint32_t(int, int, int)> emit = [&](int k, int cx, int cy) -> uint32_t {
    const int w = bw >> k;
    const Cell& c = state[k][size_t(cy) * w + cx];
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(MixedNode{});
    if (k == 0 || c.merged) {
      out.nodes[idx].kind =
          c.kind == PredictorKind::Inter ? MixedKind::Inter : MixedKind::Intra;
      if (c.kind == PredictorKind::Inter) out.nodes[idx].vec = c.rep;
      return idx;
    }
    out.nodes[idx].kind = MixedKind::Split;
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

MixedForest build_mixed(const MotionField& field, const Frame& reference,
                        const Frame& target, const GridGeometry& geom,
                        const PenaltyPolicy& policy, const MergePolicy& merge) {
  return build_mixed_from_decisions(decide_blocks(field, reference, target, geom, policy),
                                    geom, field.d_max, merge);
}

MixedForest build_unmerged_mixed(const std::vector<BlockMode>& modes,
                                 const GridGeometry& geom, int d_max) {
  geom.check();
  if (modes.size() != size_t(geom.base_block_count()))
    throw Error("mode count does not match the grid");

  MixedForest out;
  out.geom = geom;
  out.d_max = d_max;
  const int bw = geom.blocks_x();

  std::function<uint32_t(int, int, int)> emit = [&](int bx0, int by0,
                                                    int side_blocks) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(MixedNode{});
    if (side_blocks == 1) {
      const BlockMode& m = modes[size_t(by0) * bw + bx0];
      out.nodes[idx].kind =
          m.kind == PredictorKind::Inter ? MixedKind::Inter : MixedKind::Intra;
      if (m.kind == PredictorKind::Inter) out.nodes[idx].vec = m.vec;
      return idx;
    }
    out.nodes[idx].kind = MixedKind::Split;
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

std::vector<BlockMode> flatten_mixed(const MixedForest& forest) {
  forest.geom.check();
  const int bw = forest.geom.blocks_x();
  std::vector<BlockMode> modes(size_t(forest.geom.base_block_count()));

  std::function<void(uint32_t, int, int, int)> fill = [&](uint32_t idx, int bx0, int by0,
                                                          int side_blocks) {
    const MixedNode& n = forest.nodes[idx];
    if (n.kind != MixedKind::Split) {
      BlockMode m;
      m.kind = n.kind == MixedKind::Inter ? PredictorKind::Inter : PredictorKind::Intra;
      if (n.kind == MixedKind::Inter) m.vec = n.vec;
      for (int y = 0; y < side_blocks; ++y)
        for (int x = 0; x < side_blocks; ++x) modes[size_t(by0 + y) * bw + bx0 + x] = m;
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
  return modes;
}

namespace {

void emit_mixed_tree(const MixedForest& f, uint32_t idx, int size, BitWriter& w,
                     std::vector<uint32_t>& inter_terminals) {
  const MixedNode& n = f.nodes[idx];
  if (size == f.geom.min_block) {
    if (n.kind == MixedKind::Split) throw Error("split below the minimum block size");
    w.put(n.kind == MixedKind::Intra ? 1 : 0);
    if (n.kind == MixedKind::Inter) inter_terminals.push_back(idx);
    return;
  }
  if (n.kind == MixedKind::Split) {
    w.put(1);
    for (int i = 0; i < 4; ++i) emit_mixed_tree(f, n.child[i], size / 2, w, inter_terminals);
    return;
  }
  w.put(0);
  w.put(n.kind == MixedKind::Intra ? 1 : 0);
  if (n.kind == MixedKind::Inter) inter_terminals.push_back(idx);
}

}  // namespace

Bitstream encode_mixed(const MixedForest& forest, bool with_flag) {
  forest.geom.check();
  BitWriter w;
  if (with_flag) w.put(1);
  std::vector<uint32_t> inter_terminals;
  for (uint32_t root : forest.roots)
    emit_mixed_tree(forest, root, forest.geom.max_block, w, inter_terminals);
  for (uint32_t idx : inter_terminals) {
    put_twos_complement(w, forest.nodes[idx].vec.dx, 4);
    put_twos_complement(w, forest.nodes[idx].vec.dy, 4);
  }
  return w.take();
}

Bitstream encode_mixed_flat(const MixedForest& forest) {
  const std::vector<BlockMode> modes = flatten_mixed(forest);
  BitWriter w;
  w.put(0);  // quadtree coding not in use
  for (const BlockMode& m : modes) w.put(m.kind == PredictorKind::Intra ? 1 : 0);
  for (const BlockMode& m : modes) {
    if (m.kind != PredictorKind::Inter) continue;
    put_twos_complement(w, m.vec.dx, 4);
    put_twos_complement(w, m.vec.dy, 4);
  }
  return w.take();
}

MixedForest decode_mixed(const Bitstream& bits, const GridGeometry& geom, bool with_flag,
                         int d_max) {
  geom.check();
  BitReader r(bits);

  if (with_flag && r.get() == 0) {
    std::vector<BlockMode> modes(size_t(geom.base_block_count()));
    for (BlockMode& m : modes)
      m.kind = r.get() ? PredictorKind::Intra : PredictorKind::Inter;
    for (BlockMode& m : modes) {
      if (m.kind != PredictorKind::Inter) continue;
      m.vec.dx = get_twos_complement(r, 4);
      m.vec.dy = get_twos_complement(r, 4);
    }
    r.finish_padding();
    return build_unmerged_mixed(modes, geom, d_max);
  }

  MixedForest out;
  out.geom = geom;
  out.d_max = d_max;
  std::vector<uint32_t> inter_terminals;

  std::function<uint32_t(int)> parse = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(MixedNode{});
    if (size == geom.min_block) {
      out.nodes[idx].kind = r.get() ? MixedKind::Intra : MixedKind::Inter;
      if (out.nodes[idx].kind == MixedKind::Inter) inter_terminals.push_back(idx);
      return idx;
    }
    if (r.get() == 1) {
      out.nodes[idx].kind = MixedKind::Split;
      for (int i = 0; i < 4; ++i) {
        const uint32_t c = parse(size / 2);
        out.nodes[idx].child[i] = c;
      }
      return idx;
    }
    out.nodes[idx].kind = r.get() ? MixedKind::Intra : MixedKind::Inter;
    if (out.nodes[idx].kind == MixedKind::Inter) inter_terminals.push_back(idx);
    return idx;
  };

  const long root_count = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < root_count; ++i) out.roots.push_back(parse(geom.max_block));
  for (uint32_t idx : inter_terminals) {
    out.nodes[idx].vec.dx = get_twos_complement(r, 4);
    out.nodes[idx].vec.dy = get_twos_complement(r, 4);
  }
  r.finish_padding();
  return out;
}

namespace {

void tally_mixed(const MixedForest& f, uint32_t idx, int size, CostReport& rep) {
  const MixedNode& n = f.nodes[idx];
  if (size == f.geom.min_block) {
    ++rep.tree_bits;  // decision bit
    ++rep.counts_per_size[size];
    if (n.kind == MixedKind::Inter) ++rep.vector_bytes;
    return;
  }
  if (n.kind == MixedKind::Split) {
    ++rep.tree_bits;
    for (int i = 0; i < 4; ++i) tally_mixed(f, n.child[i], size / 2, rep);
    return;
  }
  rep.tree_bits += 2;  // terminal bit + decision bit
  ++rep.counts_per_size[size];
  if (n.kind == MixedKind::Inter) ++rep.vector_bytes;
}

}  // namespace

CostReport mixed_cost_report(const MixedForest& forest, bool with_flag) {
  CostReport rep;
  rep.min_block = forest.geom.min_block;
  rep.flag_bits = with_flag ? 1 : 0;
  for (uint32_t root : forest.roots) tally_mixed(forest, root, forest.geom.max_block, rep);
  rep.total_bytes = (rep.total_bits() + 7) / 8;
  rep.baseline_bytes = forest.geom.base_block_count();
  rep.baseline_bits = forest.geom.base_block_count();
  rep.ratio_percent = 100.0 * double(rep.overhead_bits()) / double(rep.baseline_bits);
  return rep;
}

std::pair<CostReport, CostReport> mixed_theoretical_bounds(const GridGeometry& geom,
                                                           bool with_flag) {
  geom.check();

  MixedForest best;
  best.geom = geom;
  const long root_count = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < root_count; ++i) {
    best.roots.push_back(uint32_t(best.nodes.size()));
    best.nodes.push_back(MixedNode{});  // terminal inter, zero vector
  }

  std::vector<BlockMode> intra(size_t(geom.base_block_count()),
                               BlockMode{PredictorKind::Intra, {}});
  const MixedForest worst = build_unmerged_mixed(intra, geom);

  return {mixed_cost_report(best, with_flag), mixed_cost_report(worst, with_flag)};
}

}  // namespace mvq
