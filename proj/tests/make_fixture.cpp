// Writes the synthetic composition fields as .mvf files for the CLI test.
#include <cstdio>
#include <cstring>

#include "mvq/field_io.hpp"
#include "support/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <preset: c68|c412> <out.mvf>\n", argv[0]);
    return 2;
  }
  try {
    if (std::strcmp(argv[1], "c68") == 0) {
      const mvq::GridGeometry geom{256, 256, 16, 64};
      mvq::save_field(
          mvqtest::field_with_terminal_counts(geom, {{16, 68}, {32, 15}, {64, 8}}, 42),
          argv[2]);
    } else if (std::strcmp(argv[1], "c412") == 0) {
      const mvq::GridGeometry geom{256, 256, 8, 64};
      mvq::save_field(mvqtest::field_with_terminal_counts(
                          geom, {{8, 412}, {16, 89}, {32, 12}, {64, 1}}, 7),
                      argv[2]);
    } else {
      std::fprintf(stderr, "unknown preset '%s'\n", argv[1]);
      return 2;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
