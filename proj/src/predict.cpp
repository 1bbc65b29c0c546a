#include "mvq/predict.hpp"

namespace mvq {

Prediction write_prediction(const Frame& reference, const MotionField& field) {
  validate_geometry(reference, field.geom);
  const GridGeometry& g = field.geom;

  Prediction p;
  p.predicted.width = reference.width;
  p.predicted.height = reference.height;
  p.predicted.samples.assign(reference.samples.size(), 0);
  p.coverage.assign(reference.samples.size(), 0);

  const int bs = g.min_block;
  for (int by = 0; by < g.blocks_y(); ++by) {
    for (int bx = 0; bx < g.blocks_x(); ++bx) {
      const MotionVector v = field.at(bx, by);
      for (int y = 0; y < bs; ++y) {
        const int sy = by * bs + y;
        const int dy = sy + v.dy;
        if (dy < 0 || dy >= reference.height) continue;
        for (int x = 0; x < bs; ++x) {
          const int sx = bx * bs + x;
          const int dx = sx + v.dx;
          if (dx < 0 || dx >= reference.width) continue;
          const size_t di = size_t(dy) * reference.width + dx;
          if (p.coverage[di]) ++p.overlap_count;
          p.predicted.samples[di] = reference.at(sx, sy);
          p.coverage[di] = 1;
        }
      }
    }
  }
  for (uint8_t c : p.coverage)
    if (!c) ++p.hole_count;
  return p;
}

Frame fill_holes(const Prediction& pred, const Frame& reference) {
  if (pred.predicted.width != reference.width || pred.predicted.height != reference.height)
    throw Error("prediction and reference frames differ in geometry");
  Frame out = pred.predicted;
  for (size_t i = 0; i < out.samples.size(); ++i)
    if (!pred.coverage[i]) out.samples[i] = reference.samples[i];
  return out;
}

double frame_mad(const Frame& a, const Frame& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error("frames differ in geometry");
  long long sad = 0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    const int d = int(a.samples[i]) - int(b.samples[i]);
    sad += d >= 0 ? d : -d;
  }
  return a.samples.empty() ? 0.0 : double(sad) / double(a.samples.size());
}

}  // namespace mvq
