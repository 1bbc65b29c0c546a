#pragma once
#include <map>

namespace mvq {

// Bit/byte accounting for an encoded forest.
//
// Interframe and temporal reports measure bytes against one byte per base
// block (per field); mixed-mode reports measure the decision overhead
// (flag + tree bits) against one bit per base block.
struct CostReport {
  std::map<int, long> counts_per_size;  // block side -> terminal count
  int min_block = 0;
  long tree_bits = 0;
  long vector_bytes = 0;
  int flag_bits = 0;
  long total_bytes = 0;
  long baseline_bytes = 0;
  long baseline_bits = 0;  // set by mixed-mode accounting, else 0
  double ratio_percent = 0.0;
  long span2_terminals = 0;  // temporal accounting only
  long span1_terminals = 0;

  long total_bits() const { return flag_bits + tree_bits + 8 * vector_bytes; }
  long overhead_bits() const { return flag_bits + tree_bits; }

  long terminal_total() const {
    long n = 0;
    for (const auto& [side, count] : counts_per_size) n += count;
    return n;
  }

  // Base blocks represented by the terminals of one size (the per-row
  // "equivalent subimages" figure) and their total.
  long eq_subimages(int side) const {
    const long scale = (long(side) / min_block) * (long(side) / min_block);
    auto it = counts_per_size.find(side);
    return it == counts_per_size.end() ? 0 : it->second * scale;
  }
  long eq_subimages_total() const {
    long n = 0;
    for (const auto& [side, count] : counts_per_size) n += eq_subimages(side);
    return n;
  }
};

}  // namespace mvq
