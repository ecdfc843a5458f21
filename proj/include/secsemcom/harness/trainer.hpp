#pragma once

#include <filesystem>
#include <vector>

#include "secsemcom/checkpoint.hpp"
#include "secsemcom/dataset.hpp"
#include "secsemcom/harness/config.hpp"
#include "secsemcom/harness/run_record.hpp"

namespace secsemcom::harness {

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainOutcome {
  std::filesystem::path run_dir;
  std::filesystem::path checkpoint;
  std::vector<objectives::LossReport> epoch_reports;
  codec::Codec<float> model;
};

// One optimization run: encode -> power-normalize -> channel -> decode with
// the shared decoder -> objective -> Adam step. Eve's branch is evaluated
// only under the secure objective; both decodes go through one parameter
// set. Pretraining is the same loop with a noiseless channel and the plain
// MSE objective.
class Trainer {
 public:
  Trainer(TrainConfig config, const dataset::DatasetSplit& train_split);

  TrainOutcome pretrain(const std::filesystem::path& out_dir);
  TrainOutcome train(const std::filesystem::path& out_dir);

 private:
  TrainOutcome run(const std::filesystem::path& out_dir, bool ideal_channel,
                   const std::string& phase);

  TrainConfig cfg_;
  const dataset::DatasetSplit* split_;
};

}  // namespace secsemcom::harness
