#include "mvq/motion.hpp"

#include <cstdlib>

namespace mvq {

bool operator==(const MotionField& a, const MotionField& b) {
  return a.geom == b.geom && a.d_max == b.d_max && a.vectors == b.vectors;
}

namespace {

long long block_sad(const Frame& reference, const Frame& target, int ox, int oy, int size,
                    MotionVector v) {
  long long sad = 0;
  for (int y = 0; y < size; ++y) {
    const uint8_t* ref_row = &reference.samples[size_t(oy + y) * reference.width + ox];
    const uint8_t* tgt_row = &target.samples[size_t(oy + y + v.dy) * target.width + ox + v.dx];
    for (int x = 0; x < size; ++x) {
      const int d = int(tgt_row[x]) - int(ref_row[x]);
      sad += d >= 0 ? d : -d;
    }
  }
  return sad;
}

bool candidate_in_bounds(const Frame& target, int ox, int oy, int size, MotionVector v) {
  return target.contains_block(ox + v.dx, oy + v.dy, size);
}

void check_params(const SearchParams& params) {
  if (params.d_max < 0) throw Error("negative displacement bound");
  if (params.max_refinement_passes < 1) throw Error("at least one refinement pass required");
}

// Tie order: (sad, |dx|+|dy|, dy, dx) lexicographically ascending.
bool better(long long sad, MotionVector v, long long best_sad, MotionVector best) {
  if (sad != best_sad) return sad < best_sad;
  const int m = std::abs(v.dx) + std::abs(v.dy);
  const int bm = std::abs(best.dx) + std::abs(best.dy);
  if (m != bm) return m < bm;
  if (v.dy != best.dy) return v.dy < best.dy;
  return v.dx < best.dx;
}

}  // namespace

double block_mad(const Frame& reference, const Frame& target, int origin_x, int origin_y,
                 int size, MotionVector v) {
  if (size <= 0) throw Error("degenerate geometry: non-positive block size");
  if (!reference.contains_block(origin_x, origin_y, size))
    throw Error("source block outside the reference frame");
  if (!candidate_in_bounds(target, origin_x, origin_y, size, v))
    throw Error("displaced block footprint outside the target frame");
  return double(block_sad(reference, target, origin_x, origin_y, size, v)) /
         (double(size) * size);
}

SearchResult full_search(const Frame& reference, const Frame& target, int origin_x,
                         int origin_y, int size, const SearchParams& params) {
  check_params(params);
  if (!reference.contains_block(origin_x, origin_y, size))
    throw Error("source block outside the reference frame");
  MotionVector best{0, 0};
  long long best_sad = block_sad(reference, target, origin_x, origin_y, size, best);
  for (int dy = -params.d_max; dy <= params.d_max; ++dy) {
    for (int dx = -params.d_max; dx <= params.d_max; ++dx) {
      const MotionVector v{dx, dy};
      if (!candidate_in_bounds(target, origin_x, origin_y, size, v)) continue;
      const long long sad = block_sad(reference, target, origin_x, origin_y, size, v);
      if (better(sad, v, best_sad, best)) {
        best_sad = sad;
        best = v;
      }
    }
  }
  return {best, double(best_sad) / (double(size) * size)};
}

SearchResult conjugate_direction_search(const Frame& reference, const Frame& target,
                                        int origin_x, int origin_y, int size,
                                        const SearchParams& params) {
  check_params(params);
  if (!reference.contains_block(origin_x, origin_y, size))
    throw Error("source block outside the reference frame");
  MotionVector cur{0, 0};
  long long cur_sad = block_sad(reference, target, origin_x, origin_y, size, cur);

  auto try_step = [&](int axis_dx, int axis_dy) -> bool {
    // Inspect both one-step neighbours along the axis; move to the best
    // strict improvement. -1 is inspected first and wins improvement ties.
    bool moved_any = false;
    for (;;) {
      MotionVector best = cur;
      long long best_sad = cur_sad;
      for (int step : {-1, 1}) {
        const MotionVector cand{cur.dx + step * axis_dx, cur.dy + step * axis_dy};
        if (std::abs(cand.dx) > params.d_max || std::abs(cand.dy) > params.d_max) continue;
        if (!candidate_in_bounds(target, origin_x, origin_y, size, cand)) continue;
        const long long sad = block_sad(reference, target, origin_x, origin_y, size, cand);
        if (sad < best_sad) {
          best_sad = sad;
          best = cand;
        }
      }
      if (best == cur) return moved_any;
      cur = best;
      cur_sad = best_sad;
      moved_any = true;
    }
  };

  for (int pass = 0; pass < params.max_refinement_passes; ++pass) {
    bool moved = try_step(1, 0);
    moved = try_step(0, 1) || moved;
    if (!moved) break;
  }
  return {cur, double(cur_sad) / (double(size) * size)};
}

MotionField estimate_field(const Frame& reference, const Frame& target,
                           const GridGeometry& geom, const SearchParams& params) {
  validate_geometry(reference, geom);
  if (target.width != reference.width || target.height != reference.height)
    throw Error("reference and target frames differ in geometry");

  MotionField field;
  field.geom = geom;
  field.d_max = params.d_max;
  field.vectors.resize(size_t(geom.base_block_count()));
  const int bs = geom.min_block;
  for (int by = 0; by < geom.blocks_y(); ++by) {
    for (int bx = 0; bx < geom.blocks_x(); ++bx) {
      const SearchResult r =
          params.mode == SearchMode::FullSearch
              ? full_search(reference, target, bx * bs, by * bs, bs, params)
              : conjugate_direction_search(reference, target, bx * bs, by * bs, bs, params);
      field.at(bx, by) = r.vec;
    }
  }
  return field;
}

}  // namespace mvq
