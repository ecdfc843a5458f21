#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "secsemcom/objectives.hpp"

namespace secsemcom::harness {

// Append-only JSONL run log inside a run directory. Each row carries a
// "type"; a final {"type":"complete"} marker distinguishes finished runs
// from aborted ones.
class RunRecord {
 public:
  RunRecord(const std::filesystem::path& run_dir, bool fresh = true);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path record_file() const { return dir_ / "record.jsonl"; }

  void append(const nlohmann::json& row);
  void append_meta(const nlohmann::json& fields);
  void append_epoch(int epoch, const objectives::LossReport& report);
  void append_eval(const nlohmann::json& row);
  void append_abort(const std::string& reason);
  void mark_complete();

  static std::vector<nlohmann::json> read_rows(const std::filesystem::path& record_file);
  static bool is_complete(const std::filesystem::path& record_file);

 private:
  std::filesystem::path dir_;
  std::ofstream out_;
};

}  // namespace secsemcom::harness
