#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "secsemcom/channel.hpp"
#include "secsemcom/codec.hpp"
#include "secsemcom/objectives.hpp"

namespace secsemcom::harness {

using codec::ConfigError;

// Flat key-value configuration: one `section.key = value` per line, `#`
// comments. Every key must be consumed by a reader; leftovers are typos and
// are fatal.
class KvConfig {
 public:
  static KvConfig from_file(const std::filesystem::path& path);
  static KvConfig from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, std::optional<std::string> def = {});
  double get_double(const std::string& key, std::optional<double> def = {});
  int get_int(const std::string& key, std::optional<int> def = {});
  uint64_t get_u64(const std::string& key, std::optional<uint64_t> def = {});
  bool get_bool(const std::string& key, std::optional<bool> def = {});

  void ensure_all_consumed() const;

 private:
  std::string raw(const std::string& key);

  std::string origin_;
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

struct OptimizerConfig {
  std::string kind = "adam";
  double learning_rate = 1e-4;
};

struct TrainConfig {
  codec::CodecConfig codec;
  channel::ChannelConfig channel;
  objectives::ObjectiveConfig objective;
  OptimizerConfig optimizer;
  int batch_size = 32;
  int epochs = 150;
  double power = 1.0;  // per-symbol average transmit power p
  std::string pretrain_checkpoint;
  uint64_t master_seed = 1;
  std::string run_id;

  static TrainConfig from_config(KvConfig& cfg);
  // Canonical echo of the resolved configuration, re-parsable by from_config.
  std::string to_config_text() const;
  std::string derive_run_id(const std::string& phase) const;
};

struct SweepSpec {
  std::vector<double> snr_points_db = {-5, 0, 5, 10, 15, 20};
  bool eval_bob = true;
  bool eval_eve = true;
  int num_eval_batches = 0;  // 0 = the whole test split
  uint64_t eval_seed = 0;    // 0 = derive from master_seed
  int batch_size = 32;

  static SweepSpec from_config(KvConfig& cfg, const TrainConfig& train);
};

}  // namespace secsemcom::harness
