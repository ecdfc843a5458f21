#pragma once

#include "secsemcom/nn/activations.hpp"
#include "secsemcom/nn/conv2d.hpp"

namespace secsemcom::nn {

// Pre-activation residual block with an identity skip:
//   y = x + conv2(lrelu(conv1(lrelu(x))))
// Channel count is preserved.
template <typename S>
class ResidualBlock {
 public:
  struct Cache {
    Tensor<S> input;
    typename Conv2d<S>::Cache conv1;
    Tensor<S> mid;  // conv1 output, pre-activation
    typename Conv2d<S>::Cache conv2;
  };

  ResidualBlock() = default;
  explicit ResidualBlock(int channels)
      : conv1_(channels, channels, 3, 1, 1), conv2_(channels, channels, 3, 1, 1) {}

  void init(RngStream& rng) {
    conv1_.init(rng);
    conv2_.init(rng);
  }

  Tensor<S> forward(const Tensor<S>& x, Cache* cache) const {
    Tensor<S> a = leaky_relu(x, kSlope);
    Tensor<S> mid = conv1_.forward(a, cache ? &cache->conv1 : nullptr);
    Tensor<S> a2 = leaky_relu(mid, kSlope);
    Tensor<S> out = conv2_.forward(a2, cache ? &cache->conv2 : nullptr);
    out.vec() += x.vec();
    if (cache) {
      cache->input = x;
      cache->mid = std::move(mid);
    }
    return out;
  }

  Tensor<S> backward(const Tensor<S>& gy, const Cache& cache) {
    Tensor<S> g2 = conv2_.backward(gy, cache.conv2);
    Tensor<S> g_mid = leaky_relu_backward(g2, cache.mid, kSlope);
    Tensor<S> g1 = conv1_.backward(g_mid, cache.conv1);
    Tensor<S> gx = leaky_relu_backward(g1, cache.input, kSlope);
    gx.vec() += gy.vec();  // skip path
    return gx;
  }

  void collect_params(const std::string& prefix, ParamList<S>& out) {
    conv1_.collect_params(prefix + ".conv1", out);
    conv2_.collect_params(prefix + ".conv2", out);
  }

  static constexpr S kSlope = S(0.2);

 private:
  Conv2d<S> conv1_, conv2_;
};

}  // namespace secsemcom::nn
