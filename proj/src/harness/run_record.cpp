#include "secsemcom/harness/run_record.hpp"

namespace secsemcom::harness {

using nlohmann::json;

RunRecord::RunRecord(const std::filesystem::path& run_dir, bool fresh) : dir_(run_dir) {
  std::filesystem::create_directories(run_dir);
  out_.open(record_file(), fresh ? std::ios::trunc : std::ios::app);
  if (!out_) throw std::runtime_error("cannot open run record: " + record_file().string());
}

void RunRecord::append(const json& row) {
  out_ << row.dump() << "\n";
  out_.flush();
  if (!out_) throw std::runtime_error("failed writing run record: " + record_file().string());
}

void RunRecord::append_meta(const json& fields) {
  json row = fields;
  row["type"] = "meta";
  append(row);
}

void RunRecord::append_epoch(int epoch, const objectives::LossReport& report) {
  append({{"type", "epoch"},
          {"epoch", epoch},
          {"loss", report.total},
          {"bob_distortion", report.bob_distortion},
          {"eve_blackness_distance", report.eve_blackness_distance},
          {"penalty_active_fraction", report.penalty_active_fraction}});
}

void RunRecord::append_eval(const json& row) {
  json r = row;
  r["type"] = "eval";
  append(r);
}

void RunRecord::append_abort(const std::string& reason) {
  append({{"type", "abort"}, {"reason", reason}});
}

void RunRecord::mark_complete() { append({{"type", "complete"}}); }

std::vector<json> RunRecord::read_rows(const std::filesystem::path& record_file) {
  std::ifstream in(record_file);
  if (!in) throw std::runtime_error("cannot read run record: " + record_file.string());
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(json::parse(line));
  }
  return rows;
}

bool RunRecord::is_complete(const std::filesystem::path& record_file) {
  const auto rows = read_rows(record_file);
  for (const auto& r : rows)
    if (r.value("type", "") == "complete") return true;
  return false;
}

}  // namespace secsemcom::harness
