#include "secsemcom/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace secsemcom::ckpt {

using nlohmann::json;

namespace {

json codec_config_json(const codec::CodecConfig& c) {
  return {{"num_filters", c.num_filters},
          {"latent_channels", c.latent_channels},
          {"downsample_stages", c.downsample_stages},
          {"image_h", c.image_h},
          {"image_w", c.image_w},
          {"image_c", c.image_c}};
}

codec::CodecConfig codec_config_from_json(const json& j) {
  codec::CodecConfig c;
  c.num_filters = j.at("num_filters").get<int>();
  c.latent_channels = j.at("latent_channels").get<int>();
  c.downsample_stages = j.at("downsample_stages").get<int>();
  c.image_h = j.at("image_h").get<int>();
  c.image_w = j.at("image_w").get<int>();
  c.image_c = j.at("image_c").get<int>();
  return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, codec::Codec<float>& model,
                     const Meta& meta) {
  auto params = model.params();
  json header;
  header["format_version"] = kFormatVersion;
  header["scalar"] = "f32";
  header["codec"] = codec_config_json(model.config);
  header["meta"] = meta;
  json tensors = json::array();
  for (const auto& p : params)
    tensors.push_back({{"name", p.name}, {"count", p.value->size()}});
  header["tensors"] = tensors;
  const std::string htext = header.dump();

  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out.write(kMagic, 4);
  const uint32_t version = kFormatVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const uint64_t hlen = htext.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const auto& p : params)
    out.write(reinterpret_cast<const char*>(p.value->data()),
              static_cast<std::streamsize>(p.value->size() * sizeof(float)));
  if (!out) throw std::runtime_error("short write on checkpoint: " + path.string());
}

codec::Codec<float> load_checkpoint(const std::filesystem::path& path,
                                    const std::optional<codec::CodecConfig>& expected,
                                    Meta* meta_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint not found: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a checkpoint file: " + path.string());
  uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kFormatVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw std::runtime_error("truncated checkpoint header: " + path.string());
  const json header = json::parse(htext);
  if (header.at("scalar").get<std::string>() != "f32")
    throw std::runtime_error("unsupported checkpoint scalar type");

  const codec::CodecConfig cfg = codec_config_from_json(header.at("codec"));
  if (expected && !(cfg == *expected))
    throw codec::ConfigError("checkpoint config mismatch: " + path.string());

  codec::Codec<float> model(cfg);
  auto params = model.params();
  const json& tensors = header.at("tensors");
  if (tensors.size() != params.size())
    throw std::runtime_error("checkpoint tensor count mismatch");
  for (size_t i = 0; i < params.size(); ++i) {
    const std::string name = tensors[i].at("name").get<std::string>();
    const size_t count = tensors[i].at("count").get<size_t>();
    if (name != params[i].name || count != params[i].value->size())
      throw std::runtime_error("checkpoint tensor '" + name + "' does not match '" +
                               params[i].name + "'");
    in.read(reinterpret_cast<char*>(params[i].value->data()),
            static_cast<std::streamsize>(count * sizeof(float)));
  }
  if (!in) throw std::runtime_error("truncated checkpoint payload: " + path.string());
  if (meta_out) {
    meta_out->clear();
    for (const auto& [k, v] : header.at("meta").items())
      (*meta_out)[k] = v.get<std::string>();
  }
  return model;
}

}  // namespace secsemcom::ckpt
