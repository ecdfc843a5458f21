#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "secsemcom/codec.hpp"

namespace secsemcom::ckpt {

// Named-tensor archive: magic + version, a JSON header embedding the codec
// config, tensor directory and free-form metadata, then raw little-endian
// float32 payload.
inline constexpr char kMagic[4] = {'S', 'S', 'C', 'C'};
inline constexpr uint32_t kFormatVersion = 1;

using Meta = std::map<std::string, std::string>;

void save_checkpoint(const std::filesystem::path& path, codec::Codec<float>& model,
                     const Meta& meta);

// Rebuilds the codec from the embedded config. When `expected` is given, a
// differing embedded config is an error.
codec::Codec<float> load_checkpoint(const std::filesystem::path& path,
                                    const std::optional<codec::CodecConfig>& expected = {},
                                    Meta* meta_out = nullptr);

}  // namespace secsemcom::ckpt
