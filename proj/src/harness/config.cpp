#include "secsemcom/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "secsemcom/rng.hpp"

namespace secsemcom::harness {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

KvConfig KvConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path.string());
}

KvConfig KvConfig::from_string(const std::string& text, const std::string& origin) {
  KvConfig cfg;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!cfg.values_.emplace(key, value).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                        "'");
  }
  return cfg;
}

std::string KvConfig::raw(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string KvConfig::get_string(const std::string& key, std::optional<std::string> def) {
  if (!has(key)) {
    if (def) return *def;
    return raw(key);  // throws
  }
  return raw(key);
}

double KvConfig::get_double(const std::string& key, std::optional<double> def) {
  if (!has(key) && def) return *def;
  const std::string v = raw(key);
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + v + "'");
  }
}

int KvConfig::get_int(const std::string& key, std::optional<int> def) {
  if (!has(key) && def) return *def;
  const std::string v = raw(key);
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos, 10);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "': not an integer: '" + v + "'");
  }
}

uint64_t KvConfig::get_u64(const std::string& key, std::optional<uint64_t> def) {
  if (!has(key) && def) return *def;
  const std::string v = raw(key);
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos, 10);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "': not an integer: '" + v + "'");
  }
}

bool KvConfig::get_bool(const std::string& key, std::optional<bool> def) {
  if (!has(key) && def) return *def;
  const std::string v = raw(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(origin_ + ": key '" + key + "': not a boolean: '" + v + "'");
}

void KvConfig::ensure_all_consumed() const {
  std::string unknown;
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty())
    throw ConfigError(origin_ + ": unknown configuration keys: " + unknown);
}

TrainConfig TrainConfig::from_config(KvConfig& cfg) {
  TrainConfig tc;
  tc.codec.num_filters = cfg.get_int("codec.filters", 128);
  tc.codec.latent_channels = cfg.get_int("codec.latent_channels", 8);
  tc.codec.downsample_stages = cfg.get_int("codec.stages", 3);
  tc.codec.image_h = cfg.get_int("codec.image_height", 128);
  tc.codec.image_w = cfg.get_int("codec.image_width", 128);
  tc.codec.image_c = cfg.get_int("codec.image_channels", 3);
  tc.codec.validate();

  const std::string kind = cfg.get_string("channel.kind", "awgn");
  tc.channel = kind == "awgn" ? channel::ChannelConfig::awgn_default()
                              : channel::ChannelConfig::miso_default();
  tc.channel.kind = channel::channel_kind_from_string(kind);
  tc.channel.snr_bob_db = cfg.get_double("channel.snr_bob_db", tc.channel.snr_bob_db);
  tc.channel.eve_noise_ratio_db =
      cfg.get_double("channel.eve_noise_ratio_db", tc.channel.eve_noise_ratio_db);
  tc.channel.antennas = cfg.get_int("channel.antennas", tc.channel.antennas);
  tc.channel.validate();

  tc.objective.kind =
      objectives::objective_kind_from_string(cfg.get_string("objective.kind", "mse"));
  tc.objective.lambda_weight = cfg.get_double("objective.lambda", 0.5);
  tc.objective.epsilon_threshold = cfg.get_double("objective.epsilon", 0.05);
  tc.objective.validate();

  tc.optimizer.kind = cfg.get_string("optimizer.kind", "adam");
  if (tc.optimizer.kind != "adam")
    throw ConfigError("optimizer.kind: only 'adam' is supported");
  tc.optimizer.learning_rate = cfg.get_double("optimizer.learning_rate", 1e-4);

  tc.batch_size = cfg.get_int("train.batch_size", 32);
  tc.epochs = cfg.get_int("train.epochs", 150);
  tc.power = cfg.get_double("train.power", 1.0);
  tc.pretrain_checkpoint = cfg.get_string("train.pretrain_checkpoint", "");
  tc.master_seed = cfg.get_u64("train.master_seed", 1);
  tc.run_id = cfg.get_string("run.id", "");

  if (tc.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (tc.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (!(tc.power > 0.0)) throw ConfigError("train.power must be > 0");
  return tc;
}

std::string TrainConfig::to_config_text() const {
  std::ostringstream os;
  os << "codec.filters = " << codec.num_filters << "\n"
     << "codec.latent_channels = " << codec.latent_channels << "\n"
     << "codec.stages = " << codec.downsample_stages << "\n"
     << "codec.image_height = " << codec.image_h << "\n"
     << "codec.image_width = " << codec.image_w << "\n"
     << "codec.image_channels = " << codec.image_c << "\n"
     << "channel.kind = " << channel::to_string(channel.kind) << "\n"
     << "channel.snr_bob_db = " << channel.snr_bob_db << "\n"
     << "channel.eve_noise_ratio_db = " << channel.eve_noise_ratio_db << "\n"
     << "channel.antennas = " << channel.antennas << "\n"
     << "objective.kind = " << objectives::to_string(objective.kind) << "\n"
     << "objective.lambda = " << objective.lambda_weight << "\n"
     << "objective.epsilon = " << objective.epsilon_threshold << "\n"
     << "optimizer.kind = " << optimizer.kind << "\n"
     << "optimizer.learning_rate = " << optimizer.learning_rate << "\n"
     << "train.batch_size = " << batch_size << "\n"
     << "train.epochs = " << epochs << "\n"
     << "train.power = " << power << "\n";
  if (!pretrain_checkpoint.empty())
    os << "train.pretrain_checkpoint = " << pretrain_checkpoint << "\n";
  os << "train.master_seed = " << master_seed << "\n";
  if (!run_id.empty()) os << "run.id = " << run_id << "\n";
  return os.str();
}

std::string TrainConfig::derive_run_id(const std::string& phase) const {
  if (!run_id.empty()) return run_id;
  std::ostringstream os;
  os << phase << "-" << channel::to_string(channel.kind) << "-"
     << objectives::to_string(objective.kind) << "-snr";
  if (std::isfinite(channel.snr_bob_db))
    os << channel.snr_bob_db;
  else
    os << "ideal";
  os << "-seed" << master_seed;
  return os.str();
}

SweepSpec SweepSpec::from_config(KvConfig& cfg, const TrainConfig& train) {
  SweepSpec spec;
  spec.batch_size = train.batch_size;
  if (cfg.has("sweep.snr_points_db")) {
    spec.snr_points_db.clear();
    for (const std::string& item : split_list(cfg.get_string("sweep.snr_points_db")))
      spec.snr_points_db.push_back(std::stod(item));
    if (spec.snr_points_db.empty()) throw ConfigError("sweep.snr_points_db: empty list");
  }
  if (cfg.has("sweep.receivers")) {
    spec.eval_bob = spec.eval_eve = false;
    for (const std::string& r : split_list(cfg.get_string("sweep.receivers"))) {
      if (r == "bob")
        spec.eval_bob = true;
      else if (r == "eve")
        spec.eval_eve = true;
      else
        throw ConfigError("sweep.receivers: unknown receiver '" + r + "'");
    }
  }
  spec.num_eval_batches = cfg.get_int("sweep.eval_batches", 0);
  spec.eval_seed = cfg.get_u64("sweep.eval_seed", 0);
  if (spec.eval_seed == 0)
    spec.eval_seed = RngStream::derive_seed(train.master_seed, "eval");
  return spec;
}

}  // namespace secsemcom::harness
