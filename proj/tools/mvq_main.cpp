// Command line front end: block-matching estimation, quadtree field
// coding, prediction by block writing, and the theoretical bound tables.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mvq/container.hpp"
#include "mvq/field_io.hpp"
#include "mvq/inter_intra.hpp"
#include "mvq/predict.hpp"
#include "mvq/quadtree.hpp"
#include "mvq/temporal3d.hpp"

namespace {

struct FrameInput {
  bool raw = false;
  int width = 0;
  int height = 0;
};

mvq::Frame load_input(const std::string& path, const FrameInput& fi, int frame_index) {
  if (fi.raw) {
    if (fi.width <= 0 || fi.height <= 0)
      throw mvq::Error("--raw input needs --width and --height");
    return mvq::load_raw_y8(path, fi.width, fi.height, frame_index);
  }
  return mvq::load_pgm(path);
}

std::string ratio_form(double percent, bool one_decimal) {
  char buf[32];
  if (one_decimal)
    std::snprintf(buf, sizeof buf, "100:%.1f", percent);
  else  // nearest integer, ties to even: 12.5% prints as 100:12
    std::snprintf(buf, sizeof buf, "100:%ld", long(std::nearbyint(percent)));
  return buf;
}

void print_cost_table(const mvq::CostReport& rep) {
  std::printf("%-12s %-12s %s\n", "BLOCK SIZE", "N. BLOCKS", "EQ. SUBIMAGES");
  for (const auto& [side, count] : rep.counts_per_size) {
    char label[16];
    std::snprintf(label, sizeof label, "%dx%d", side, side);
    std::printf("%-12s %-12ld %ld\n", label, count, rep.eq_subimages(side));
  }
  std::printf("%-12s %-12ld %ld\n", "TOTAL", rep.terminal_total(), rep.eq_subimages_total());
  std::printf("tree bits:    %ld\n", rep.tree_bits);
  std::printf("vector bytes: %ld\n", rep.vector_bytes);
  if (rep.flag_bits) std::printf("flag bits:    %d\n", rep.flag_bits);
  std::printf("total bytes:  %ld\n", rep.total_bytes);
  if (rep.baseline_bits > 0) {
    std::printf("decision overhead: %ld bits vs %ld bits\n", rep.overhead_bits(),
                rep.baseline_bits);
    std::printf("ratio:        %f%% (%s)\n", rep.ratio_percent,
                ratio_form(rep.ratio_percent, false).c_str());
  } else {
    std::printf("baseline:     %ld bytes\n", rep.baseline_bytes);
    std::printf("ratio:        %f%% (%s)\n", rep.ratio_percent,
                ratio_form(rep.ratio_percent, true).c_str());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"mvq - variable block size motion field codec"};
  app.require_subcommand(1);

  FrameInput fi;
  mvq::GridGeometry geom{0, 0, 16, 64};
  int d_max = 7;
  std::string search = "cds";
  int passes = 2;
  std::string mode = "inter";
  bool with_flag = false;
  int merge_t = 0;
  bool strict_merge = false;
  double penalty = 1.2;
  double bias = 1.25;
  bool adaptive = false;

  auto add_raw_opts = [&](CLI::App* cmd) {
    cmd->add_flag("--raw", fi.raw, "inputs are headerless Y8 planes");
    cmd->add_option("--width", fi.width, "raw frame width");
    cmd->add_option("--height", fi.height, "raw frame height");
  };
  auto add_grid_opts = [&](CLI::App* cmd) {
    cmd->add_option("--min-block", geom.min_block, "minimum block side (default 16)");
    cmd->add_option("--max-block", geom.max_block, "maximum block side (default 64)");
  };

  // estimate
  std::string ref_path, target_path, out_path, out_later_path, field_path, later_path;
  int ref_index = 0, target_index = 1;
  std::string pred_path;
  auto* est = app.add_subcommand("estimate", "estimate a motion field between two frames");
  est->add_option("reference", ref_path)->required();
  est->add_option("target", target_path)->required();
  est->add_option("-o,--output", out_path, "motion field text file")->required();
  add_raw_opts(est);
  add_grid_opts(est);
  est->add_option("--dmax", d_max, "maximum displacement (default 7)");
  est->add_option("--search", search, "cds | full")->check(CLI::IsMember({"cds", "full"}));
  est->add_option("--passes", passes, "refinement passes for cds (default 2)");
  est->add_option("--ref-frame", ref_index, "plane index for raw reference");
  est->add_option("--target-frame", target_index, "plane index for raw target");
  est->add_option("--pred", pred_path, "also write the filled prediction as PGM");
  est->callback([&] {
    const mvq::Frame ref = load_input(ref_path, fi, ref_index);
    const mvq::Frame tgt = load_input(target_path, fi, target_index);
    geom.width = ref.width;
    geom.height = ref.height;
    mvq::SearchParams params;
    params.d_max = d_max;
    params.mode = search == "full" ? mvq::SearchMode::FullSearch
                                   : mvq::SearchMode::ConjugateDirection;
    params.max_refinement_passes = passes;
    const mvq::MotionField field = mvq::estimate_field(ref, tgt, geom, params);
    const mvq::Prediction pred = mvq::write_prediction(ref, field);
    const mvq::Frame filled = mvq::fill_holes(pred, ref);
    std::printf("frame MAD before prediction: %f\n", mvq::frame_mad(ref, tgt));
    std::printf("frame MAD after prediction:  %f\n", mvq::frame_mad(filled, tgt));
    std::printf("holes: %ld  overlaps: %ld\n", pred.hole_count, pred.overlap_count);
    mvq::save_field(field, out_path);
    std::printf("field written: %s (%zu vectors)\n", out_path.c_str(),
                field.vectors.size());
    if (!pred_path.empty()) {
      mvq::store_pgm(filled, pred_path);
      std::printf("prediction written: %s\n", pred_path.c_str());
    }
  });

  // encode
  auto* enc = app.add_subcommand("encode", "encode a motion field file to a container");
  enc->add_option("field", field_path, "motion field text file")->required();
  enc->add_option("later", later_path, "second field for --mode 3d");
  enc->add_option("-o,--output", out_path, "container file")->required();
  enc->add_option("--mode", mode, "inter | mixed | 3d")
      ->check(CLI::IsMember({"inter", "mixed", "3d"}));
  enc->add_option("--max-block", geom.max_block, "maximum block side (default 64)");
  enc->add_flag("--flag", with_flag, "prepend the quadtree-in-use flag bit");
  enc->add_option("--merge-t", merge_t, "relaxed merge threshold (0 = exact)");
  enc->add_flag("--strict-merge", strict_merge, "relaxed merge measured on base vectors");
  enc->add_option("--ref", ref_path, "reference frame (mixed mode)");
  enc->add_option("--target", target_path, "target frame (mixed mode)");
  add_raw_opts(enc);
  enc->add_option("--ref-frame", ref_index, "plane index for raw reference");
  enc->add_option("--target-frame", target_index, "plane index for raw target");
  enc->add_option("--penalty", penalty, "intra error penalty P (> 1, default 1.2)");
  enc->add_flag("--adaptive", adaptive, "adapt the penalty to decided siblings");
  enc->add_option("--bias", bias, "adaptive neighbor bias (default 1.25)");
  enc->callback([&] {
    const mvq::MergePolicy policy{merge_t, strict_merge};
    mvq::Container c;
    c.with_flag = with_flag;
    if (mode == "inter") {
      const mvq::MotionField field = mvq::load_field(field_path, geom.max_block);
      const mvq::QuadForest forest = mvq::build_bottom_up(field, field.geom, policy);
      c.geom = field.geom;
      c.d_max = field.d_max;
      c.mode = mvq::StreamMode::Interframe;
      c.payload = mvq::encode_interframe(forest, with_flag);
      print_cost_table(mvq::cost_report(forest, with_flag));
    } else if (mode == "mixed") {
      if (ref_path.empty() || target_path.empty())
        throw mvq::Error("mixed mode needs --ref and --target frames");
      const mvq::MotionField field = mvq::load_field(field_path, geom.max_block);
      const mvq::Frame ref = load_input(ref_path, fi, ref_index);
      const mvq::Frame tgt = load_input(target_path, fi, target_index);
      mvq::PenaltyPolicy pp{penalty, adaptive, bias};
      const mvq::MixedForest forest =
          mvq::build_mixed(field, ref, tgt, field.geom, pp, policy);
      c.geom = field.geom;
      c.d_max = field.d_max;
      c.mode = mvq::StreamMode::Mixed;
      c.payload = mvq::encode_mixed(forest, with_flag);
      print_cost_table(mvq::mixed_cost_report(forest, with_flag));
    } else {
      if (later_path.empty()) throw mvq::Error("3d mode needs two field files");
      mvq::FieldPair pair;
      pair.earlier = mvq::load_field(field_path, geom.max_block);
      pair.later = mvq::load_field(later_path, geom.max_block);
      const mvq::Forest3D forest = mvq::build_3d(pair, pair.earlier.geom, policy);
      c.geom = pair.earlier.geom;
      c.d_max = pair.earlier.d_max;
      c.mode = mvq::StreamMode::Temporal3D;
      c.payload = mvq::encode_3d(forest);
      print_cost_table(mvq::cost_report_3d(forest));
    }
    mvq::save_container(c, out_path);
    std::printf("container written: %s (%zu payload bytes)\n", out_path.c_str(),
                c.payload.byte_count());
  });

  // decode
  std::string in_path;
  auto* dec = app.add_subcommand("decode", "decode a container back to field files");
  dec->add_option("container", in_path)->required();
  dec->add_option("-o,--output", out_path, "output field/decision file")->required();
  dec->add_option("--out-later", out_later_path, "second field output for 3d containers");
  dec->callback([&] {
    const mvq::Container c = mvq::load_container(in_path);
    switch (c.mode) {
      case mvq::StreamMode::Interframe: {
        const mvq::QuadForest forest =
            mvq::decode_interframe(c.payload, c.geom, c.with_flag, c.d_max);
        mvq::save_field(mvq::flatten(forest), out_path);
        std::printf("mode: interframe\nfield written: %s\n", out_path.c_str());
        break;
      }
      case mvq::StreamMode::Mixed: {
        const mvq::MixedForest forest =
            mvq::decode_mixed(c.payload, c.geom, c.with_flag, c.d_max);
        mvq::save_modes(mvq::flatten_mixed(forest), c.geom, c.d_max, out_path);
        std::printf("mode: mixed\ndecisions written: %s\n", out_path.c_str());
        break;
      }
      case mvq::StreamMode::Temporal3D: {
        if (out_later_path.empty())
          throw mvq::Error("3d container needs --out-later for the second field");
        const mvq::Forest3D forest = mvq::decode_3d(c.payload, c.geom, c.d_max);
        const mvq::FieldPair pair = mvq::flatten_3d(forest);
        mvq::save_field(pair.earlier, out_path);
        mvq::save_field(pair.later, out_later_path);
        std::printf("mode: temporal3d\nfields written: %s %s\n", out_path.c_str(),
                    out_later_path.c_str());
        break;
      }
    }
  });

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "write a predicted frame from a field");
  rec->add_option("reference", ref_path)->required();
  rec->add_option("field", field_path)->required();
  rec->add_option("-o,--output", out_path, "predicted frame (PGM)")->required();
  add_raw_opts(rec);
  rec->add_option("--ref-frame", ref_index, "plane index for raw reference");
  rec->add_option("--max-block", geom.max_block, "maximum block side (default 64)");
  rec->callback([&] {
    const mvq::Frame ref = load_input(ref_path, fi, ref_index);
    const mvq::MotionField field = mvq::load_field(field_path, geom.max_block);
    const mvq::Prediction pred = mvq::write_prediction(ref, field);
    const mvq::Frame filled = mvq::fill_holes(pred, ref);
    std::printf("holes: %ld (filled from reference)  overlaps: %ld\n", pred.hole_count,
                pred.overlap_count);
    mvq::store_pgm(filled, out_path);
    std::printf("prediction written: %s\n", out_path.c_str());
  });

  // bounds
  auto* bnd = app.add_subcommand("bounds", "print best/worst coding costs for a geometry");
  bnd->add_option("--width", geom.width, "frame width")->required();
  bnd->add_option("--height", geom.height, "frame height")->required();
  add_grid_opts(bnd);
  bnd->add_option("--mode", mode, "inter | mixed")->check(CLI::IsMember({"inter", "mixed"}));
  bnd->add_flag("--flag", with_flag, "include the quadtree-in-use flag bit");
  bnd->callback([&] {
    geom.check();
    const long n = geom.base_block_count();
    if (mode == "inter") {
      const auto [best, worst] = mvq::theoretical_bounds(geom, with_flag);
      std::printf("interframe bounds, N=%ld base blocks, baseline %ld bytes (%s)\n", n,
                  best.baseline_bytes, with_flag ? "with flag" : "no flag");
      std::printf("BETTER %s (N:%ld)\n", ratio_form(best.ratio_percent, false).c_str(),
                  best.total_bytes);
      std::printf("WORST  %s (N:%ld)\n", ratio_form(worst.ratio_percent, false).c_str(),
                  worst.total_bytes);
      if (with_flag)
        std::printf("note: worst case is the fully split forest plus the flag bit\n");
    } else {
      const auto [best, worst] = mvq::mixed_theoretical_bounds(geom, with_flag);
      std::printf("inter/intra bounds, %ld base blocks, baseline %ld bits (%s)\n", n,
                  best.baseline_bits, with_flag ? "with flag" : "no flag");
      std::printf("BETTER %s (%ld:%ld)\n", ratio_form(best.ratio_percent, false).c_str(), n,
                  best.overhead_bits());
      std::printf("WORST  %s (%ld:%ld)\n", ratio_form(worst.ratio_percent, false).c_str(), n,
                  worst.overhead_bits());
      if (with_flag)
        std::printf("note: worst case is the fully split forest plus the flag bit\n");
    }
  });

  // report
  auto* rep = app.add_subcommand("report", "print the cost table of a container");
  rep->add_option("container", in_path)->required();
  rep->callback([&] {
    const mvq::Container c = mvq::load_container(in_path);
    switch (c.mode) {
      case mvq::StreamMode::Interframe:
        print_cost_table(mvq::cost_report(
            mvq::decode_interframe(c.payload, c.geom, c.with_flag, c.d_max), c.with_flag));
        break;
      case mvq::StreamMode::Mixed:
        print_cost_table(mvq::mixed_cost_report(
            mvq::decode_mixed(c.payload, c.geom, c.with_flag, c.d_max), c.with_flag));
        break;
      case mvq::StreamMode::Temporal3D:
        print_cost_table(mvq::cost_report_3d(mvq::decode_3d(c.payload, c.geom, c.d_max)));
        break;
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
