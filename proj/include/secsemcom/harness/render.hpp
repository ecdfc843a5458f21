#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "secsemcom/codec.hpp"
#include "secsemcom/dataset.hpp"
#include "secsemcom/harness/config.hpp"

namespace secsemcom::harness {

struct RenderRequest {
  std::vector<std::string> image_ids;  // source_ids from the test split
  double snr_db = 10.0;
  uint64_t seed = 0;
  std::string run_id = "render";
  std::filesystem::path out_dir;
};

// Side-by-side [original | Bob | Eve] panels as PNG files, one per image id,
// H x 3W pixels.
std::vector<std::filesystem::path> render_examples(codec::Codec<float>& model,
                                                   const channel::ChannelConfig& chan,
                                                   double power,
                                                   const dataset::DatasetSplit& split,
                                                   const RenderRequest& req);

}  // namespace secsemcom::harness
