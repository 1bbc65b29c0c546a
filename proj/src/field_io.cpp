#include "mvq/field_io.hpp"

#include <fstream>
#include <sstream>

namespace mvq {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

void check_vector(MotionVector v, int d_max) {
  if (v.dx < -d_max || v.dx > d_max || v.dy < -d_max || v.dy > d_max)
    throw Error("vector exceeds the declared displacement bound");
}

}  // namespace

void save_field(const MotionField& field, const std::string& path) {
  field.geom.check();
  auto out = open_out(path);
  out << "mvfield " << field.geom.width << " " << field.geom.height << " "
      << field.geom.min_block << " " << field.d_max << "\n";
  for (const MotionVector& v : field.vectors) out << v.dx << " " << v.dy << "\n";
  if (!out) throw Error("I/O failure writing '" + path + "'");
}

MotionField load_field(const std::string& path, int max_block) {
  auto in = open_in(path);
  std::string magic;
  MotionField field;
  field.geom.max_block = max_block;
  if (!(in >> magic >> field.geom.width >> field.geom.height >> field.geom.min_block >>
        field.d_max) ||
      magic != "mvfield")
    throw Error("malformed field file header in '" + path + "'");
  field.geom.check();
  if (field.d_max < 0) throw Error("malformed field file header: negative d_max");

  field.vectors.resize(size_t(field.geom.base_block_count()));
  for (MotionVector& v : field.vectors) {
    if (!(in >> v.dx >> v.dy)) throw Error("truncated field file '" + path + "'");
    check_vector(v, field.d_max);
  }
  return field;
}

void save_modes(const std::vector<BlockMode>& modes, const GridGeometry& geom, int d_max,
                const std::string& path) {
  geom.check();
  if (modes.size() != size_t(geom.base_block_count()))
    throw Error("mode count does not match the grid");
  auto out = open_out(path);
  out << "mvdecisions " << geom.width << " " << geom.height << " " << geom.min_block << " "
      << d_max << "\n";
  for (const BlockMode& m : modes) {
    if (m.kind == PredictorKind::Inter)
      out << "inter " << m.vec.dx << " " << m.vec.dy << "\n";
    else
      out << "intra\n";
  }
  if (!out) throw Error("I/O failure writing '" + path + "'");
}

std::vector<BlockMode> load_modes(const std::string& path, GridGeometry& geom_out,
                                  int& d_max_out, int max_block) {
  auto in = open_in(path);
  std::string magic;
  geom_out.max_block = max_block;
  if (!(in >> magic >> geom_out.width >> geom_out.height >> geom_out.min_block >>
        d_max_out) ||
      magic != "mvdecisions")
    throw Error("malformed decision file header in '" + path + "'");
  geom_out.check();

  std::vector<BlockMode> modes(size_t(geom_out.base_block_count()));
  for (BlockMode& m : modes) {
    std::string kind;
    if (!(in >> kind)) throw Error("truncated decision file '" + path + "'");
    if (kind == "inter") {
      m.kind = PredictorKind::Inter;
      if (!(in >> m.vec.dx >> m.vec.dy)) throw Error("truncated decision file '" + path + "'");
      check_vector(m.vec, d_max_out);
    } else if (kind == "intra") {
      m.kind = PredictorKind::Intra;
    } else {
      throw Error("unknown predictor kind '" + kind + "' in '" + path + "'");
    }
  }
  return modes;
}

}  // namespace mvq
