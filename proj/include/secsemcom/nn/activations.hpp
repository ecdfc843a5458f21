#pragma once

#include <cmath>

#include "secsemcom/tensor.hpp"

namespace secsemcom::nn {

template <typename S>
Tensor<S> leaky_relu(const Tensor<S>& x, S slope) {
  Tensor<S> y = x;
  for (size_t i = 0; i < y.size(); ++i)
    if (y[i] < S(0)) y[i] *= slope;
  return y;
}

template <typename S>
Tensor<S> leaky_relu_backward(const Tensor<S>& gy, const Tensor<S>& x, S slope) {
  Tensor<S> gx = gy;
  for (size_t i = 0; i < gx.size(); ++i)
    if (x[i] < S(0)) gx[i] *= slope;
  return gx;
}

template <typename S>
Tensor<S> sigmoid(const Tensor<S>& x) {
  Tensor<S> y = Tensor<S>::zeros_like(x);
  for (size_t i = 0; i < x.size(); ++i)
    y[i] = S(1) / (S(1) + std::exp(-x[i]));
  return y;
}

// Takes the forward output, not the input.
template <typename S>
Tensor<S> sigmoid_backward(const Tensor<S>& gy, const Tensor<S>& y) {
  Tensor<S> gx = gy;
  for (size_t i = 0; i < gx.size(); ++i)
    gx[i] *= y[i] * (S(1) - y[i]);
  return gx;
}

}  // namespace secsemcom::nn
