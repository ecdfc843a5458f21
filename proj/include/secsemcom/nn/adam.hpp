#pragma once

#include <cmath>

#include "secsemcom/nn/param.hpp"

namespace secsemcom::nn {

template <typename S>
class Adam {
 public:
  Adam() = default;
  Adam(const ParamList<S>& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& p : params_) {
      m_.push_back(Tensor<S>::zeros_like(*p.value));
      v_.push_back(Tensor<S>::zeros_like(*p.value));
    }
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t k = 0; k < params_.size(); ++k) {
      Tensor<S>& p = *params_[k].value;
      const Tensor<S>& g = *params_[k].grad;
      Tensor<S>& m = m_[k];
      Tensor<S>& v = v_[k];
      for (size_t i = 0; i < p.size(); ++i) {
        const double gi = static_cast<double>(g[i]);
        const double mi = beta1_ * m[i] + (1.0 - beta1_) * gi;
        const double vi = beta2_ * v[i] + (1.0 - beta2_) * gi * gi;
        m[i] = static_cast<S>(mi);
        v[i] = static_cast<S>(vi);
        p[i] -= static_cast<S>(lr_ * (mi / bc1) / (std::sqrt(vi / bc2) + eps_));
      }
    }
  }

  double learning_rate() const { return lr_; }
  long steps_taken() const { return t_; }

 private:
  ParamList<S> params_;
  double lr_ = 1e-4, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  long t_ = 0;
  std::vector<Tensor<S>> m_, v_;
};

}  // namespace secsemcom::nn
