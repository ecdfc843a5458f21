#pragma once

#include <string>
#include <vector>

#include "secsemcom/codec.hpp"
#include "secsemcom/dataset.hpp"
#include "secsemcom/harness/config.hpp"

namespace secsemcom::harness {

struct SweepRow {
  double snr_db = 0.0;
  std::string receiver;  // "bob" | "eve"
  double ssim = 0.0;     // windowed
  double ssim_global = 0.0;
  double psnr_db = 0.0;
  double mean_intensity = 0.0;
};

// Frozen-model evaluation over the test split: for every SNR point and
// receiver, run seeded channel noise (and, for MISO, seeded fading drawn
// fresh per batch) through the shared decoder and average image metrics.
std::vector<SweepRow> evaluate_sweep(codec::Codec<float>& model, const SweepSpec& spec,
                                     const channel::ChannelConfig& chan, double power,
                                     const dataset::DatasetSplit& test_split);

}  // namespace secsemcom::harness
