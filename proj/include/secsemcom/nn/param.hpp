#pragma once

#include <string>
#include <vector>

#include "secsemcom/tensor.hpp"

namespace secsemcom::nn {

// Named handle to one trainable tensor and its gradient accumulator.
template <typename S>
struct ParamRef {
  std::string name;
  Tensor<S>* value = nullptr;
  Tensor<S>* grad = nullptr;
};

template <typename S>
using ParamList = std::vector<ParamRef<S>>;

template <typename S>
inline void zero_grads(ParamList<S>& params) {
  for (auto& p : params) p.grad->set_zero();
}

template <typename S>
inline size_t param_count(const ParamList<S>& params) {
  size_t total = 0;
  for (const auto& p : params) total += p.value->size();
  return total;
}

}  // namespace secsemcom::nn
