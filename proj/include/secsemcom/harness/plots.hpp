#pragma once

#include <filesystem>
#include <vector>

namespace secsemcom::harness {

// Reads eval rows from the given record.jsonl files and writes
// ssim-vs-snr curves: one SVG with a polyline per (objective, receiver)
// pair, plus the underlying table as CSV. Output is byte-deterministic for
// the same inputs.
struct PlotOutputs {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

PlotOutputs emit_plots(const std::vector<std::filesystem::path>& record_files,
                       const std::filesystem::path& out_dir);

}  // namespace secsemcom::harness
