#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secsemcom/tensor.hpp"

namespace secsemcom::objectives {

enum class ObjectiveKind { mse, secure_mse };

inline std::string to_string(ObjectiveKind k) {
  return k == ObjectiveKind::mse ? "mse" : "secure_mse";
}
inline ObjectiveKind objective_kind_from_string(const std::string& s) {
  if (s == "mse") return ObjectiveKind::mse;
  if (s == "secure_mse") return ObjectiveKind::secure_mse;
  throw std::invalid_argument("unknown objective kind '" + s + "' (mse|secure_mse)");
}

// lambda and epsilon are quoted in per-pixel mean-squared units (distortion
// below is pixel-mean normalized), so thresholds carry across resolutions.
struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::mse;
  double lambda_weight = 0.5;
  double epsilon_threshold = 0.05;

  void validate() const {
    if (lambda_weight < 0.0 || epsilon_threshold < 0.0)
      throw std::invalid_argument("objective config: lambda and epsilon must be >= 0");
  }
};

struct LossReport {
  double total = 0.0;
  double bob_distortion = 0.0;
  double eve_blackness_distance = 0.0;   // batch mean of d(0, s_hat_e)
  double penalty_active_fraction = 0.0;  // fraction of items with d(0, s_hat_e) > eps
};

// Per-item distortion d = mean over pixels of (a - b)^2.
template <typename S>
std::vector<double> distortion(const Tensor<S>& a, const Tensor<S>& b) {
  check_same_shape(a, b, "distortion");
  const size_t m = a.item_size();
  std::vector<double> d(a.n(), 0.0);
  for (int i = 0; i < a.n(); ++i) {
    const S* pa = a.item(i);
    const S* pb = b.item(i);
    double acc = 0.0;
    for (size_t k = 0; k < m; ++k) {
      const double diff = static_cast<double>(pa[k]) - static_cast<double>(pb[k]);
      acc += diff * diff;
    }
    d[i] = acc / static_cast<double>(m);
  }
  return d;
}

// Distance to the all-black image: d(0, x) per item.
template <typename S>
std::vector<double> distance_to_black(const Tensor<S>& x) {
  const size_t m = x.item_size();
  std::vector<double> d(x.n(), 0.0);
  for (int i = 0; i < x.n(); ++i) {
    const S* p = x.item(i);
    double acc = 0.0;
    for (size_t k = 0; k < m; ++k) acc += static_cast<double>(p[k]) * p[k];
    d[i] = acc / static_cast<double>(m);
  }
  return d;
}

template <typename S>
double mse_loss(const Tensor<S>& s, const Tensor<S>& s_hat) {
  const std::vector<double> d = distortion(s, s_hat);
  double total = 0.0;
  for (double x : d) total += x;
  return total / static_cast<double>(d.size());
}

// dL/ds_hat for L = (1/B) sum_i d(s_i, s_hat_i).
template <typename S>
Tensor<S> mse_loss_backward(const Tensor<S>& s, const Tensor<S>& s_hat) {
  check_same_shape(s, s_hat, "mse_loss_backward");
  Tensor<S> g = Tensor<S>::zeros_like(s_hat);
  const double scale = 2.0 / (static_cast<double>(s.n()) * s.item_size());
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = static_cast<S>(scale * (static_cast<double>(s_hat[i]) - s[i]));
  return g;
}

// Eq-style thresholded leakage penalty, per item:
//   d' = -d(0, s_hat_e)  if d(0, s_hat_e) > eps, else 0.
template <typename S>
std::vector<double> leakage_penalty(const Tensor<S>& s_hat_e, double eps) {
  std::vector<double> d0 = distance_to_black(s_hat_e);
  for (double& x : d0) x = (x > eps) ? -x : 0.0;
  return d0;
}

// L = (1/B) sum_i [ d(s_i, s_hat_b_i) - lambda * d'_i ].
// Active items contribute +lambda * d(0, s_hat_e_i), pulling Eve's
// reconstruction toward black.
template <typename S>
std::pair<double, LossReport> secure_mse_loss(const Tensor<S>& s, const Tensor<S>& s_hat_b,
                                              const Tensor<S>& s_hat_e,
                                              const ObjectiveConfig& cfg) {
  if (cfg.kind != ObjectiveKind::secure_mse)
    throw std::invalid_argument("secure_mse_loss: objective kind is not secure_mse");
  check_same_shape(s, s_hat_b, "secure_mse_loss");
  check_same_shape(s, s_hat_e, "secure_mse_loss");
  const std::vector<double> db = distortion(s, s_hat_b);
  const std::vector<double> d0 = distance_to_black(s_hat_e);
  const int B = s.n();
  LossReport rep;
  int active = 0;
  double total = 0.0;
  for (int i = 0; i < B; ++i) {
    const bool is_active = d0[i] > cfg.epsilon_threshold;
    total += db[i] + (is_active ? cfg.lambda_weight * d0[i] : 0.0);
    rep.bob_distortion += db[i];
    rep.eve_blackness_distance += d0[i];
    active += is_active ? 1 : 0;
  }
  total /= B;
  rep.total = total;
  rep.bob_distortion /= B;
  rep.eve_blackness_distance /= B;
  rep.penalty_active_fraction = static_cast<double>(active) / B;
  return {total, rep};
}

template <typename S>
struct SecureGrads {
  Tensor<S> bob;  // dL/ds_hat_b
  Tensor<S> eve;  // dL/ds_hat_e
};

// The threshold gate is treated as a constant under differentiation: active
// items get the penalty gradient, inactive items get exactly zero.
template <typename S>
SecureGrads<S> secure_mse_backward(const Tensor<S>& s, const Tensor<S>& s_hat_b,
                                   const Tensor<S>& s_hat_e, const ObjectiveConfig& cfg) {
  const std::vector<double> d0 = distance_to_black(s_hat_e);
  const int B = s.n();
  const size_t m = s.item_size();
  SecureGrads<S> g;
  g.bob = mse_loss_backward(s, s_hat_b);
  g.eve = Tensor<S>::zeros_like(s_hat_e);
  const double scale = 2.0 * cfg.lambda_weight / (static_cast<double>(B) * m);
  for (int i = 0; i < B; ++i) {
    if (d0[i] <= cfg.epsilon_threshold) continue;
    const S* src = s_hat_e.item(i);
    S* dst = g.eve.item(i);
    for (size_t k = 0; k < m; ++k) dst[k] = static_cast<S>(scale * src[k]);
  }
  return g;
}

}  // namespace secsemcom::objectives
