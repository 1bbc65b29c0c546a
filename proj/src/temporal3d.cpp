#include "mvq/temporal3d.hpp"

#include <functional>

#include "vector_stats.hpp"

namespace mvq {

using detail::VecStats;

bool operator==(const FieldPair& a, const FieldPair& b) {
  return a.earlier == b.earlier && a.later == b.later;
}

namespace {

bool node2d_equal(const Forest3D& a, uint32_t ai, const Forest3D& b, uint32_t bi) {
  const QuadNode& na = a.nodes2d[ai];
  const QuadNode& nb = b.nodes2d[bi];
  if (na.split != nb.split) return false;
  if (!na.split) return na.vec == nb.vec;
  for (int i = 0; i < 4; ++i)
    if (!node2d_equal(a, na.child[i], b, nb.child[i])) return false;
  return true;
}

bool node3d_equal(const Forest3D& a, uint32_t ai, const Forest3D& b, uint32_t bi) {
  const Node3D& na = a.nodes[ai];
  const Node3D& nb = b.nodes[bi];
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case Kind3D::Span2:
      return na.vec == nb.vec;
    case Kind3D::Fork:
      return node2d_equal(a, na.fork_earlier, b, nb.fork_earlier) &&
             node2d_equal(a, na.fork_later, b, nb.fork_later);
    case Kind3D::Split:
      for (int i = 0; i < 4; ++i)
        if (!node3d_equal(a, na.child[i], b, nb.child[i])) return false;
      return true;
  }
  return false;
}

struct Cell {
  Kind3D kind = Kind3D::Span2;
  MotionVector rep{};  // Span2 representative
  VecStats covered{};  // both fields
  bool a_term = false, b_term = false;
  MotionVector a_rep{}, b_rep{};
  VecStats a_cov{}, b_cov{};
};

}  // namespace

bool forest3d_equal(const Forest3D& a, const Forest3D& b) {
  if (a.geom != b.geom || a.roots.size() != b.roots.size()) return false;
  for (size_t i = 0; i < a.roots.size(); ++i)
    if (!node3d_equal(a, a.roots[i], b, b.roots[i])) return false;
  return true;
}

Forest3D build_3d(const FieldPair& pair, const GridGeometry& geom,
                  const MergePolicy& policy) {
  geom.check();
  if (pair.earlier.geom != geom || pair.later.geom != geom)
    throw Error("field pair does not match the grid geometry");
  if (pair.earlier.vectors.size() != size_t(geom.base_block_count()) ||
      pair.later.vectors.size() != pair.earlier.vectors.size())
    throw Error("field pair vector count does not match the grid");
  if (pair.earlier.d_max != pair.later.d_max)
    throw Error("field pair d_max mismatch");
  const int d_max = pair.earlier.d_max;

  const int levels = geom.levels();
  const int bw = geom.blocks_x();
  const int bh = geom.blocks_y();
  std::vector<std::vector<Cell>> state(levels);
  state[0].resize(size_t(bw) * bh);
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const MotionVector a = pair.earlier.at(bx, by);
      const MotionVector b = pair.later.at(bx, by);
      Cell& c = state[0][size_t(by) * bw + bx];
      c.a_cov = VecStats::of(a);
      c.b_cov = VecStats::of(b);
      c.covered = c.a_cov;
      c.covered.add(c.b_cov);
      const MotionVector reps[2] = {a, b};
      MotionVector rep;
      if (detail::merge_group(policy, reps, 2, c.covered, d_max, rep)) {
        c.kind = Kind3D::Span2;
        c.rep = rep;
      } else {
        c.kind = Kind3D::Fork;
        c.a_term = c.b_term = true;
        c.a_rep = a;
        c.b_rep = b;
      }
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
        for (const Cell* s : ch) {
          c.covered.add(s->covered);
          c.a_cov.add(s->a_cov);
          c.b_cov.add(s->b_cov);
        }

        const bool all_span2 = ch[0]->kind == Kind3D::Span2 &&
                               ch[1]->kind == Kind3D::Span2 &&
                               ch[2]->kind == Kind3D::Span2 &&
                               ch[3]->kind == Kind3D::Span2;
        if (all_span2) {
          const MotionVector reps[4] = {ch[0]->rep, ch[1]->rep, ch[2]->rep, ch[3]->rep};
          bool ok;
          MotionVector rep;
          if (!policy.exact() && !policy.strict_leaves && k == 1) {
            // first joint stage groups the eight covered vectors directly
            ok = c.covered.spread() <= policy.threshold;
            rep = c.covered.mean_toward_zero(d_max);
          } else {
            ok = detail::merge_group(policy, reps, 4, c.covered, d_max, rep);
          }
          if (ok) {
            c.kind = Kind3D::Span2;
            c.rep = rep;
            continue;
          }
          c.kind = Kind3D::Split;
          continue;
        }

        const bool all_fork = ch[0]->kind == Kind3D::Fork && ch[1]->kind == Kind3D::Fork &&
                              ch[2]->kind == Kind3D::Fork && ch[3]->kind == Kind3D::Fork;
        if (all_fork) {
          c.kind = Kind3D::Fork;
          if (ch[0]->a_term && ch[1]->a_term && ch[2]->a_term && ch[3]->a_term) {
            const MotionVector reps[4] = {ch[0]->a_rep, ch[1]->a_rep, ch[2]->a_rep,
                                          ch[3]->a_rep};
            c.a_term = detail::merge_group(policy, reps, 4, c.a_cov, d_max, c.a_rep);
          }
          if (ch[0]->b_term && ch[1]->b_term && ch[2]->b_term && ch[3]->b_term) {
            const MotionVector reps[4] = {ch[0]->b_rep, ch[1]->b_rep, ch[2]->b_rep,
                                          ch[3]->b_rep};
            c.b_term = detail::merge_group(policy, reps, 4, c.b_cov, d_max, c.b_rep);
          }
          continue;
        }

        c.kind = Kind3D::Split;
      }
    }
  }

  Forest3D out;
  out.geom = geom;
  out.d_max = d_max;

  // Per-field subtree below a fork cell; fork cells only group fork cells,
  // so the side information exists all the way down.
  std::function<uint32_t(int, int, int, bool)> emit_side = [&](int k, int cx, int cy,
                                                               bool earlier) -> uint32_t {
    const int w = bw >> k;
    const Cell& c = state[k][size_t(cy) * w + cx];
    const bool term = earlier ? c.a_term : c.b_term;
    const uint32_t idx = uint32_t(out.nodes2d.size());
    out.nodes2d.push_back(QuadNode{});
    if (k == 0 || term) {
      out.nodes2d[idx].vec = earlier ? c.a_rep : c.b_rep;
      return idx;
    }
    out.nodes2d[idx].split = true;
    out.nodes2d[idx].child[0] = emit_side(k - 1, 2 * cx, 2 * cy, earlier);
    out.nodes2d[idx].child[1] = emit_side(k - 1, 2 * cx + 1, 2 * cy, earlier);
    out.nodes2d[idx].child[2] = emit_side(k - 1, 2 * cx, 2 * cy + 1, earlier);
    out.nodes2d[idx].child[3] = emit_side(k - 1, 2 * cx + 1, 2 * cy + 1, earlier);
    return idx;
  };

  std::function<uint32_t(int, int, int)> emit = [&](int k, int cx, int cy) -> uint32_t {
    const int w = bw >> k;
    const Cell& c = state[k][size_t(cy) * w + cx];
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(Node3D{});
    out.nodes[idx].kind = c.kind;
    if (c.kind == Kind3D::Span2) {
      out.nodes[idx].vec = c.rep;
      return idx;
    }
    if (c.kind == Kind3D::Fork) {
      const uint32_t a = emit_side(k, cx, cy, true);
      const uint32_t b = emit_side(k, cx, cy, false);
      out.nodes[idx].fork_earlier = a;
      out.nodes[idx].fork_later = b;
      return idx;
    }
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

FieldPair flatten_3d(const Forest3D& forest) {
  forest.geom.check();
  FieldPair pair;
  for (MotionField* f : {&pair.earlier, &pair.later}) {
    f->geom = forest.geom;
    f->d_max = forest.d_max;
    f->vectors.resize(size_t(forest.geom.base_block_count()));
  }

  std::function<void(uint32_t, int, int, int, MotionField&)> fill2d =
      [&](uint32_t idx, int bx0, int by0, int side_blocks, MotionField& field) {
        const QuadNode& n = forest.nodes2d[idx];
        if (!n.split) {
          for (int y = 0; y < side_blocks; ++y)
            for (int x = 0; x < side_blocks; ++x) field.at(bx0 + x, by0 + y) = n.vec;
          return;
        }
        const int half = side_blocks / 2;
        fill2d(n.child[0], bx0, by0, half, field);
        fill2d(n.child[1], bx0 + half, by0, half, field);
        fill2d(n.child[2], bx0, by0 + half, half, field);
        fill2d(n.child[3], bx0 + half, by0 + half, half, field);
      };

  std::function<void(uint32_t, int, int, int)> fill = [&](uint32_t idx, int bx0, int by0,
                                                          int side_blocks) {
    const Node3D& n = forest.nodes[idx];
    if (n.kind == Kind3D::Span2) {
      for (int y = 0; y < side_blocks; ++y)
        for (int x = 0; x < side_blocks; ++x) {
          pair.earlier.at(bx0 + x, by0 + y) = n.vec;
          pair.later.at(bx0 + x, by0 + y) = n.vec;
        }
      return;
    }
    if (n.kind == Kind3D::Fork) {
      fill2d(n.fork_earlier, bx0, by0, side_blocks, pair.earlier);
      fill2d(n.fork_later, bx0, by0, side_blocks, pair.later);
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
  return pair;
}

namespace {

void emit2d_tree(const Forest3D& f, uint32_t idx, int size, BitWriter& w,
                 std::vector<MotionVector>& vecs) {
  const QuadNode& n = f.nodes2d[idx];
  if (size == f.geom.min_block) {
    if (n.split) throw Error("split below the minimum block size");
    vecs.push_back(n.vec);
    return;
  }
  if (n.split) {
    w.put(1);
    for (int i = 0; i < 4; ++i) emit2d_tree(f, n.child[i], size / 2, w, vecs);
  } else {
    w.put(0);
    vecs.push_back(n.vec);
  }
}

void emit3d_tree(const Forest3D& f, uint32_t idx, int size, BitWriter& w,
                 std::vector<MotionVector>& vecs) {
  const Node3D& n = f.nodes[idx];
  if (size > f.geom.min_block) {
    if (n.kind == Kind3D::Split) {
      w.put(1);
      for (int i = 0; i < 4; ++i) emit3d_tree(f, n.child[i], size / 2, w, vecs);
      return;
    }
    w.put(0);
    w.put(n.kind == Kind3D::Span2 ? 1 : 0);
  } else {
    if (n.kind == Kind3D::Split) throw Error("split below the minimum block size");
    w.put(n.kind == Kind3D::Span2 ? 1 : 0);
  }
  if (n.kind == Kind3D::Span2) {
    vecs.push_back(n.vec);
    return;
  }
  emit2d_tree(f, n.fork_earlier, size, w, vecs);
  emit2d_tree(f, n.fork_later, size, w, vecs);
}

}  // namespace

Bitstream encode_3d(const Forest3D& forest) {
  forest.geom.check();
  BitWriter w;
  std::vector<MotionVector> vecs;
  for (uint32_t root : forest.roots) emit3d_tree(forest, root, forest.geom.max_block, w, vecs);
  for (const MotionVector& v : vecs) {
    put_twos_complement(w, v.dx, 4);
    put_twos_complement(w, v.dy, 4);
  }
  return w.take();
}

Forest3D decode_3d(const Bitstream& bits, const GridGeometry& geom, int d_max) {
  geom.check();
  BitReader r(bits);

  Forest3D out;
  out.geom = geom;
  out.d_max = d_max;
  // vector slots in traversal order: (true, i) = nodes[i].vec, else nodes2d
  std::vector<std::pair<bool, uint32_t>> slots;

  std::function<uint32_t(int)> parse2d = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes2d.size());
    out.nodes2d.push_back(QuadNode{});
    if (size == geom.min_block || r.get() == 0) {
      slots.emplace_back(false, idx);
      return idx;
    }
    out.nodes2d[idx].split = true;
    for (int i = 0; i < 4; ++i) {
      const uint32_t c = parse2d(size / 2);
      out.nodes2d[idx].child[i] = c;
    }
    return idx;
  };

  std::function<uint32_t(int)> parse3d = [&](int size) -> uint32_t {
    const uint32_t idx = uint32_t(out.nodes.size());
    out.nodes.push_back(Node3D{});
    if (size > geom.min_block && r.get() == 1) {
      out.nodes[idx].kind = Kind3D::Split;
      for (int i = 0; i < 4; ++i) {
        const uint32_t c = parse3d(size / 2);
        out.nodes[idx].child[i] = c;
      }
      return idx;
    }
    if (r.get() == 1) {
      out.nodes[idx].kind = Kind3D::Span2;
      slots.emplace_back(true, idx);
      return idx;
    }
    out.nodes[idx].kind = Kind3D::Fork;
    const uint32_t a = parse2d(size);
    const uint32_t b = parse2d(size);
    out.nodes[idx].fork_earlier = a;
    out.nodes[idx].fork_later = b;
    return idx;
  };

  const long root_count = long(geom.roots_x()) * geom.roots_y();
  for (long i = 0; i < root_count; ++i) out.roots.push_back(parse3d(geom.max_block));
  for (const auto& [is3d, idx] : slots) {
    MotionVector v;
    v.dx = get_twos_complement(r, 4);
    v.dy = get_twos_complement(r, 4);
    if (is3d)
      out.nodes[idx].vec = v;
    else
      out.nodes2d[idx].vec = v;
  }
  r.finish_padding();
  return out;
}

namespace {

void tally2d(const Forest3D& f, uint32_t idx, int size, CostReport& rep) {
  const QuadNode& n = f.nodes2d[idx];
  if (size > f.geom.min_block) ++rep.tree_bits;
  if (!n.split) {
    ++rep.counts_per_size[size];
    ++rep.vector_bytes;
    ++rep.span1_terminals;
    return;
  }
  for (int i = 0; i < 4; ++i) tally2d(f, n.child[i], size / 2, rep);
}

void tally3d(const Forest3D& f, uint32_t idx, int size, CostReport& rep) {
  const Node3D& n = f.nodes[idx];
  if (n.kind == Kind3D::Split) {
    ++rep.tree_bits;
    for (int i = 0; i < 4; ++i) tally3d(f, n.child[i], size / 2, rep);
    return;
  }
  rep.tree_bits += size > f.geom.min_block ? 2 : 1;  // terminal bit + span bit
  if (n.kind == Kind3D::Span2) {
    ++rep.counts_per_size[size];
    ++rep.vector_bytes;
    ++rep.span2_terminals;
    return;
  }
  tally2d(f, n.fork_earlier, size, rep);
  tally2d(f, n.fork_later, size, rep);
}

}  // namespace

CostReport cost_report_3d(const Forest3D& forest) {
  CostReport rep;
  rep.min_block = forest.geom.min_block;
  for (uint32_t root : forest.roots) tally3d(forest, root, forest.geom.max_block, rep);
  rep.total_bytes = (rep.total_bits() + 7) / 8;
  rep.baseline_bytes = 2 * forest.geom.base_block_count();
  rep.ratio_percent = 100.0 * double(rep.total_bytes) / double(rep.baseline_bytes);
  return rep;
}

}  // namespace mvq
