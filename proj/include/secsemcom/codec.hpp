#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secsemcom/nn/activations.hpp"
#include "secsemcom/nn/adam.hpp"
#include "secsemcom/nn/conv2d.hpp"
#include "secsemcom/nn/gdn.hpp"
#include "secsemcom/nn/pixel_shuffle.hpp"
#include "secsemcom/nn/residual.hpp"
#include "secsemcom/rng.hpp"
#include "secsemcom/tensor.hpp"

namespace secsemcom::codec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CodecConfig {
  int num_filters = 128;
  int latent_channels = 8;
  int downsample_stages = 3;
  int image_h = 128;
  int image_w = 128;
  int image_c = 3;

  void validate() const {
    if (num_filters <= 0 || latent_channels <= 0 || downsample_stages < 0 || image_h <= 0 ||
        image_w <= 0 || image_c <= 0)
      throw ConfigError("codec config: non-positive dimension");
    const int div = 1 << downsample_stages;
    if (image_h % div != 0 || image_w % div != 0)
      throw ConfigError("codec config: image size not divisible by 2^stages");
  }

  int latent_h() const { return image_h >> downsample_stages; }
  int latent_w() const { return image_w >> downsample_stages; }
  int latent_dim() const { return latent_h() * latent_w() * latent_channels; }

  bool operator==(const CodecConfig&) const = default;
};

// Encoder stage: residual block -> stride-2 conv -> GDN.
template <typename S>
class Encoder {
 public:
  struct StageCache {
    typename nn::ResidualBlock<S>::Cache res;
    typename nn::Conv2d<S>::Cache down;
    typename nn::Gdn<S>::Cache gdn;
  };
  struct Cache {
    std::vector<StageCache> stages;
    typename nn::Conv2d<S>::Cache proj;
  };

  Encoder() = default;
  explicit Encoder(const CodecConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    int ch = cfg.image_c;
    for (int k = 0; k < cfg.downsample_stages; ++k) {
      res_.emplace_back(ch);
      down_.emplace_back(ch, cfg.num_filters, 3, 2, 1);
      gdn_.emplace_back(cfg.num_filters, nn::GdnDirection::forward);
      ch = cfg.num_filters;
    }
    proj_ = nn::Conv2d<S>(ch, cfg.latent_channels, 3, 1, 1);
  }

  void init(RngStream& rng) {
    for (size_t k = 0; k < res_.size(); ++k) {
      res_[k].init(rng);
      down_[k].init(rng);
      gdn_[k].init();
    }
    proj_.init(rng);
  }

  // image (B,C,H,W) -> latent (B,M,1,1)
  Tensor<S> forward(const Tensor<S>& image, Cache* cache) const {
    if (image.c() != cfg_.image_c || image.h() != cfg_.image_h || image.w() != cfg_.image_w)
      throw std::invalid_argument("encode: image shape " + image.shape_str() +
                                  " does not match codec config");
    if (cache) cache->stages.resize(res_.size());
    Tensor<S> x = image;
    for (size_t k = 0; k < res_.size(); ++k) {
      StageCache* sc = cache ? &cache->stages[k] : nullptr;
      x = res_[k].forward(x, sc ? &sc->res : nullptr);
      x = down_[k].forward(x, sc ? &sc->down : nullptr);
      x = gdn_[k].forward(x, sc ? &sc->gdn : nullptr);
    }
    x = proj_.forward(x, cache ? &cache->proj : nullptr);
    const int B = x.n();
    return std::move(x).reshaped(B, cfg_.latent_dim(), 1, 1);
  }

  Tensor<S> backward(const Tensor<S>& g_latent, const Cache& cache) {
    Tensor<S> g = g_latent.reshaped(g_latent.n(), cfg_.latent_channels, cfg_.latent_h(),
                                    cfg_.latent_w());
    g = proj_.backward(g, cache.proj);
    for (int k = static_cast<int>(res_.size()) - 1; k >= 0; --k) {
      g = gdn_[k].backward(g, cache.stages[k].gdn);
      g = down_[k].backward(g, cache.stages[k].down);
      g = res_[k].backward(g, cache.stages[k].res);
    }
    return g;
  }

  void collect_params(const std::string& prefix, nn::ParamList<S>& out) {
    for (size_t k = 0; k < res_.size(); ++k) {
      const std::string sp = prefix + ".stage" + std::to_string(k);
      res_[k].collect_params(sp + ".res", out);
      down_[k].collect_params(sp + ".down", out);
      gdn_[k].collect_params(sp + ".gdn", out);
    }
    proj_.collect_params(prefix + ".proj", out);
  }

 private:
  CodecConfig cfg_;
  std::vector<nn::ResidualBlock<S>> res_;
  std::vector<nn::Conv2d<S>> down_;
  std::vector<nn::Gdn<S>> gdn_;
  nn::Conv2d<S> proj_;
};

// Decoder stage: sub-pixel upsampling conv -> inverse GDN -> residual block.
// Finishes with an output conv and a sigmoid squashing into [0,1].
template <typename S>
class Decoder {
 public:
  struct StageCache {
    typename nn::Conv2d<S>::Cache up;
    typename nn::Gdn<S>::Cache gdn;
    typename nn::ResidualBlock<S>::Cache res;
  };
  struct Cache {
    typename nn::Conv2d<S>::Cache proj;
    std::vector<StageCache> stages;
    typename nn::Conv2d<S>::Cache out;
    Tensor<S> sigmoid_out;
  };

  Decoder() = default;
  explicit Decoder(const CodecConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    proj_ = nn::Conv2d<S>(cfg.latent_channels, cfg.num_filters, 3, 1, 1);
    for (int k = 0; k < cfg.downsample_stages; ++k) {
      up_.emplace_back(cfg.num_filters, cfg.num_filters * 4, 3, 1, 1);
      gdn_.emplace_back(cfg.num_filters, nn::GdnDirection::inverse);
      res_.emplace_back(cfg.num_filters);
    }
    out_ = nn::Conv2d<S>(cfg.num_filters, cfg.image_c, 3, 1, 1);
  }

  void init(RngStream& rng) {
    proj_.init(rng);
    for (size_t k = 0; k < up_.size(); ++k) {
      up_[k].init(rng);
      gdn_[k].init();
      res_[k].init(rng);
    }
    out_.init(rng);
  }

  // latent (B,M,1,1) -> image (B,C,H,W), values in [0,1]
  Tensor<S> forward(const Tensor<S>& latent, Cache* cache) const {
    if (latent.c() != cfg_.latent_dim() || latent.h() != 1 || latent.w() != 1)
      throw std::invalid_argument("decode: latent shape " + latent.shape_str() +
                                  " does not match codec config (M=" +
                                  std::to_string(cfg_.latent_dim()) + ")");
    ++forward_calls_;
    if (cache) cache->stages.resize(up_.size());
    Tensor<S> x = latent.reshaped(latent.n(), cfg_.latent_channels, cfg_.latent_h(),
                                  cfg_.latent_w());
    x = proj_.forward(x, cache ? &cache->proj : nullptr);
    for (size_t k = 0; k < up_.size(); ++k) {
      StageCache* sc = cache ? &cache->stages[k] : nullptr;
      x = up_[k].forward(x, sc ? &sc->up : nullptr);
      x = nn::pixel_shuffle(x, 2);
      x = gdn_[k].forward(x, sc ? &sc->gdn : nullptr);
      x = res_[k].forward(x, sc ? &sc->res : nullptr);
    }
    x = out_.forward(x, cache ? &cache->out : nullptr);
    x = nn::sigmoid(x);
    if (cache) cache->sigmoid_out = x;
    return x;
  }

  Tensor<S> backward(const Tensor<S>& g_image, const Cache& cache) {
    Tensor<S> g = nn::sigmoid_backward(g_image, cache.sigmoid_out);
    g = out_.backward(g, cache.out);
    for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k) {
      g = res_[k].backward(g, cache.stages[k].res);
      g = gdn_[k].backward(g, cache.stages[k].gdn);
      g = nn::pixel_shuffle_backward(g, 2);
      g = up_[k].backward(g, cache.stages[k].up);
    }
    g = proj_.backward(g, cache.proj);
    const int B = g.n();
    return std::move(g).reshaped(B, cfg_.latent_dim(), 1, 1);
  }

  void collect_params(const std::string& prefix, nn::ParamList<S>& out) {
    proj_.collect_params(prefix + ".proj", out);
    for (size_t k = 0; k < up_.size(); ++k) {
      const std::string sp = prefix + ".stage" + std::to_string(k);
      up_[k].collect_params(sp + ".up", out);
      gdn_[k].collect_params(sp + ".gdn", out);
      res_[k].collect_params(sp + ".res", out);
    }
    out_.collect_params(prefix + ".out", out);
  }

  uint64_t forward_calls() const { return forward_calls_; }

 private:
  CodecConfig cfg_;
  nn::Conv2d<S> proj_;
  std::vector<nn::Conv2d<S>> up_;
  std::vector<nn::Gdn<S>> gdn_;
  std::vector<nn::ResidualBlock<S>> res_;
  nn::Conv2d<S> out_;
  mutable uint64_t forward_calls_ = 0;
};

template <typename S>
struct Codec {
  CodecConfig config;
  Encoder<S> encoder;
  Decoder<S> decoder;

  Codec() = default;
  explicit Codec(const CodecConfig& cfg) : config(cfg), encoder(cfg), decoder(cfg) {}

  static Codec build(const CodecConfig& cfg, uint64_t init_seed) {
    Codec codec(cfg);
    RngStream rng(init_seed, "codec-init");
    codec.encoder.init(rng);
    codec.decoder.init(rng);
    return codec;
  }

  nn::ParamList<S> params() {
    nn::ParamList<S> out;
    encoder.collect_params("encoder", out);
    decoder.collect_params("decoder", out);
    return out;
  }
};

// Average-power normalization of the latent: x = sqrt(M*p) * z / ||z||_2,
// applied per batch item, so that (1/M) * ||x||^2 = p. A 1e-12 pedestal
// inside the square root keeps the gradient finite for near-zero latents;
// an exactly zero latent is rejected.
template <typename S>
struct PowerNormCache {
  Tensor<S> z;
  std::vector<double> inv_norm;  // 1/sqrt(||z||^2 + eps) per item
};

inline constexpr double kPowerNormEps = 1e-12;

template <typename S>
Tensor<S> power_normalize(const Tensor<S>& z, double p, PowerNormCache<S>* cache = nullptr) {
  if (!(p > 0.0)) throw std::invalid_argument("power_normalize: p must be positive");
  const size_t m = z.item_size();
  Tensor<S> x = Tensor<S>::zeros_like(z);
  std::vector<double> inv_norm(z.n());
  const double scale_num = std::sqrt(static_cast<double>(m) * p);
  for (int b = 0; b < z.n(); ++b) {
    const S* zi = z.item(b);
    double n2 = 0.0;
    for (size_t i = 0; i < m; ++i) n2 += static_cast<double>(zi[i]) * zi[i];
    if (n2 == 0.0) throw std::domain_error("power_normalize: zero-power latent");
    const double inv = 1.0 / std::sqrt(n2 + kPowerNormEps);
    inv_norm[b] = inv;
    const S s = static_cast<S>(scale_num * inv);
    S* xi = x.item(b);
    for (size_t i = 0; i < m; ++i) xi[i] = zi[i] * s;
  }
  if (cache) {
    cache->z = z;
    cache->inv_norm = std::move(inv_norm);
  }
  return x;
}

template <typename S>
Tensor<S> power_normalize_backward(const Tensor<S>& g, const PowerNormCache<S>& cache,
                                   double p) {
  const Tensor<S>& z = cache.z;
  const size_t m = z.item_size();
  const double scale_num = std::sqrt(static_cast<double>(m) * p);
  Tensor<S> gz = Tensor<S>::zeros_like(z);
  for (int b = 0; b < z.n(); ++b) {
    const S* zi = z.item(b);
    const S* gi = g.item(b);
    S* out = gz.item(b);
    const double inv = cache.inv_norm[b];
    double dot = 0.0;
    for (size_t i = 0; i < m; ++i) dot += static_cast<double>(zi[i]) * gi[i];
    const double a = scale_num * inv;
    const double c = scale_num * inv * inv * inv * dot;
    for (size_t i = 0; i < m; ++i)
      out[i] = static_cast<S>(a * gi[i] - c * zi[i]);
  }
  return gz;
}

}  // namespace secsemcom::codec
