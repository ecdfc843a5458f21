#pragma once

#include <omp.h>
#include <vector>

#include "secsemcom/nn/param.hpp"
#include "secsemcom/rng.hpp"
#include "secsemcom/tensor.hpp"

namespace secsemcom::nn {

// Generalized divisive normalization across channels, per spatial position:
//
//   forward:  y_i = x_i / sqrt(beta_i + sum_j gamma_ij * x_j^2)
//   inverse:  the functional inverse of forward, computed by fixed-point
//             iteration x^{k+1} = y .* sqrt(beta + gamma * (x^k)^2); the
//             multiplicative one-shot form is the first iterate.
//
// beta is (C,1,1,1), gamma is (C,C,1,1). Preconditions: beta >= floor > 0,
// gamma >= 0, which the Gdn layer guarantees by storing square-rooted
// parameters.

enum class GdnDirection { forward, inverse };

inline constexpr double kGdnBetaFloor = 1e-6;

namespace detail {

template <typename S>
void gdn_check_params(const Tensor<S>& x, const Tensor<S>& beta, const Tensor<S>& gamma) {
  const int C = x.c();
  if (beta.size() != static_cast<size_t>(C) ||
      gamma.size() != static_cast<size_t>(C) * C)
    throw std::invalid_argument("gdn: parameter shapes do not match channel count");
  for (size_t i = 0; i < beta.size(); ++i)
    if (!(static_cast<double>(beta[i]) >= kGdnBetaFloor))
      throw std::invalid_argument("gdn: beta below floor");
  for (size_t i = 0; i < gamma.size(); ++i)
    if (static_cast<double>(gamma[i]) < 0.0)
      throw std::invalid_argument("gdn: negative gamma");
}

// denom_out, when given, receives sqrt(beta + gamma * x^2), shaped like x.
template <typename S>
Tensor<S> gdn_forward_core(const Tensor<S>& x, const Tensor<S>& beta, const Tensor<S>& gamma,
                           Tensor<S>* denom_out) {
  const int C = x.c();
  const Eigen::Index P = static_cast<Eigen::Index>(x.h()) * x.w();
  Tensor<S> y = Tensor<S>::zeros_like(x);
  Tensor<S> denom = Tensor<S>::zeros_like(x);
  typename Tensor<S>::ConstMapRM G(gamma.data(), C, C);
  typename Tensor<S>::ConstVecMap B(beta.data(), C);

#pragma omp parallel for schedule(static)
  for (int b = 0; b < x.n(); ++b) {
    auto X = x.item_mat(b);
    typename Tensor<S>::MapRM M(denom.item(b), C, P);
    M.noalias() = G * X.cwiseProduct(X);
    M.colwise() += B;
    M = M.cwiseSqrt();
    y.item_mat(b) = X.cwiseQuotient(M);
  }
  if (denom_out) *denom_out = std::move(denom);
  return y;
}

template <typename S>
struct GdnGrads {
  Tensor<S> x;      // gradient w.r.t. layer input
  Tensor<S> beta;   // (C,1,1,1)
  Tensor<S> gamma;  // (C,C,1,1)
};

template <typename S>
GdnGrads<S> gdn_forward_backward(const Tensor<S>& x, const Tensor<S>& denom,
                                 const Tensor<S>& gamma, const Tensor<S>& gy) {
  const int C = x.c();
  const Eigen::Index P = static_cast<Eigen::Index>(x.h()) * x.w();
  GdnGrads<S> g;
  g.x = Tensor<S>::zeros_like(x);
  g.beta = Tensor<S>(C, 1, 1, 1);
  g.gamma = Tensor<S>(C, C, 1, 1);
  typename Tensor<S>::ConstMapRM G(gamma.data(), C, C);

  const int nthreads = omp_get_max_threads();
  std::vector<Tensor<S>> gb(nthreads, Tensor<S>(C, 1, 1, 1));
  std::vector<Tensor<S>> gg(nthreads, Tensor<S>(C, C, 1, 1));

#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    typename Tensor<S>::MapRM GG(gg[tid].data(), C, C);
    typename Tensor<S>::VecMap GB(gb[tid].data(), C);
    typename Tensor<S>::MatRM W(C, P), U(C, P);
#pragma omp for schedule(static)
    for (int b = 0; b < x.n(); ++b) {
      auto X = x.item_mat(b);
      auto M = denom.item_mat(b);
      auto GY = gy.item_mat(b);
      // w_i = gy_i * x_i / m_i^3
      W = GY.cwiseProduct(X).cwiseQuotient(M.cwiseProduct(M).cwiseProduct(M));
      U = X.cwiseProduct(X);
      g.x.item_mat(b) = GY.cwiseQuotient(M) - X.cwiseProduct(G.transpose() * W);
      GB.noalias() -= S(0.5) * W.rowwise().sum();
      GG.noalias() -= S(0.5) * W * U.transpose();
    }
  }
  g.beta.set_zero();
  g.gamma.set_zero();
  for (int t = 0; t < nthreads; ++t) {
    g.beta.vec() += gb[t].vec();
    g.gamma.vec() += gg[t].vec();
  }
  return g;
}

// Fixed-point inverse. iters_out, when given, receives the inputs to each
// update step (x^0 .. x^{K-1}), which the backward pass replays.
template <typename S>
Tensor<S> gdn_inverse_core(const Tensor<S>& y, const Tensor<S>& beta, const Tensor<S>& gamma,
                           int max_iters, double tol, std::vector<Tensor<S>>* iters_out) {
  const int C = y.c();
  const Eigen::Index P = static_cast<Eigen::Index>(y.h()) * y.w();
  typename Tensor<S>::ConstMapRM G(gamma.data(), C, C);
  typename Tensor<S>::ConstVecMap B(beta.data(), C);

  Tensor<S> x = y;
  if (iters_out) iters_out->clear();
  for (int k = 0; k < max_iters; ++k) {
    if (iters_out) iters_out->push_back(x);
    Tensor<S> next = Tensor<S>::zeros_like(y);
    double delta = 0.0;
#pragma omp parallel for schedule(static) reduction(max : delta)
    for (int b = 0; b < y.n(); ++b) {
      auto X = x.item_mat(b);
      auto Y = y.item_mat(b);
      typename Tensor<S>::MapRM N(next.item(b), C, P);
      N.noalias() = G * X.cwiseProduct(X);
      N.colwise() += B;
      N = Y.cwiseProduct(N.cwiseSqrt());
      const double d = (N - X).template lpNorm<Eigen::Infinity>();
      delta = std::max(delta, d);
    }
    x = std::move(next);
    if (delta <= tol) break;
  }
  return x;
}

template <typename S>
GdnGrads<S> gdn_inverse_backward(const Tensor<S>& y, const std::vector<Tensor<S>>& iters,
                                 const Tensor<S>& beta, const Tensor<S>& gamma,
                                 const Tensor<S>& g_out) {
  const int C = y.c();
  const Eigen::Index P = static_cast<Eigen::Index>(y.h()) * y.w();
  typename Tensor<S>::ConstMapRM G(gamma.data(), C, C);
  typename Tensor<S>::ConstVecMap B(beta.data(), C);

  GdnGrads<S> g;
  g.x = Tensor<S>::zeros_like(y);  // gradient w.r.t. layer input y
  g.beta = Tensor<S>(C, 1, 1, 1);
  g.gamma = Tensor<S>(C, C, 1, 1);

  const int nthreads = omp_get_max_threads();
  std::vector<Tensor<S>> gb(nthreads, Tensor<S>(C, 1, 1, 1));
  std::vector<Tensor<S>> gg(nthreads, Tensor<S>(C, C, 1, 1));

  Tensor<S> grad = g_out;  // dL/dx^{k+1}, walked backwards
  for (int k = static_cast<int>(iters.size()) - 1; k >= 0; --k) {
    const Tensor<S>& xk = iters[k];
    Tensor<S> grad_prev = Tensor<S>::zeros_like(y);
#pragma omp parallel
    {
      const int tid = omp_get_thread_num();
      typename Tensor<S>::MapRM GG(gg[tid].data(), C, C);
      typename Tensor<S>::VecMap GB(gb[tid].data(), C);
      typename Tensor<S>::MatRM M(C, P), T(C, P);
#pragma omp for schedule(static)
      for (int b = 0; b < y.n(); ++b) {
        auto X = xk.item_mat(b);
        auto Y = y.item_mat(b);
        auto Gr = grad.item_mat(b);
        M.noalias() = G * X.cwiseProduct(X);
        M.colwise() += B;
        M = M.cwiseSqrt();
        // x^{k+1}_i = y_i * m_i
        g.x.item_mat(b) += Gr.cwiseProduct(M);
        T = Gr.cwiseProduct(Y).cwiseQuotient(M);
        GB.noalias() += S(0.5) * T.rowwise().sum();
        GG.noalias() += S(0.5) * T * X.cwiseProduct(X).transpose();
        grad_prev.item_mat(b) = X.cwiseProduct(G.transpose() * T);
      }
    }
    grad = std::move(grad_prev);
  }
  // x^0 = y
  g.x.vec() += grad.vec();
  g.beta.set_zero();
  g.gamma.set_zero();
  for (int t = 0; t < nthreads; ++t) {
    g.beta.vec() += gb[t].vec();
    g.gamma.vec() += gg[t].vec();
  }
  return g;
}

template <typename S>
constexpr double gdn_default_tol() {
  return sizeof(S) == 4 ? 1e-6 : 1e-12;
}

}  // namespace detail

// Spec-level op on explicit (beta, gamma).
template <typename S>
Tensor<S> gdn(const Tensor<S>& x, const Tensor<S>& beta, const Tensor<S>& gamma,
              GdnDirection dir, int max_iters = 50) {
  detail::gdn_check_params(x, beta, gamma);
  if (dir == GdnDirection::forward)
    return detail::gdn_forward_core(x, beta, gamma, static_cast<Tensor<S>*>(nullptr));
  return detail::gdn_inverse_core(x, beta, gamma, max_iters, detail::gdn_default_tol<S>(),
                                  static_cast<std::vector<Tensor<S>>*>(nullptr));
}

// Trainable layer. Parameters are stored square-rooted so that
// beta = floor + braw^2 and gamma = graw^2 keep the preconditions true for
// any optimizer step.
template <typename S>
class Gdn {
 public:
  struct Cache {
    Tensor<S> input;
    Tensor<S> denom;                // forward direction
    std::vector<Tensor<S>> iters;   // inverse direction
  };

  Gdn() = default;
  Gdn(int channels, GdnDirection dir) : channels_(channels), dir_(dir) {
    braw_ = Tensor<S>(channels, 1, 1, 1);
    graw_ = Tensor<S>(channels, channels, 1, 1);
    grad_braw_ = Tensor<S>::zeros_like(braw_);
    grad_graw_ = Tensor<S>::zeros_like(graw_);
    init();
  }

  void init() {
    // beta = 1, gamma = 0.1 on the diagonal with a small positive off-diagonal
    // so cross-channel terms keep a live gradient.
    const S b0 = static_cast<S>(std::sqrt(1.0 - kGdnBetaFloor));
    for (int i = 0; i < channels_; ++i) braw_[i] = b0;
    const S gd = static_cast<S>(std::sqrt(0.1));
    const S go = static_cast<S>(0.03);
    for (int i = 0; i < channels_; ++i)
      for (int j = 0; j < channels_; ++j)
        graw_[static_cast<size_t>(i) * channels_ + j] = (i == j) ? gd : go;
  }

  Tensor<S> effective_beta() const {
    Tensor<S> beta(channels_, 1, 1, 1);
    for (int i = 0; i < channels_; ++i)
      beta[i] = static_cast<S>(kGdnBetaFloor) + braw_[i] * braw_[i];
    return beta;
  }
  Tensor<S> effective_gamma() const {
    Tensor<S> gamma(channels_, channels_, 1, 1);
    for (size_t i = 0; i < gamma.size(); ++i) gamma[i] = graw_[i] * graw_[i];
    return gamma;
  }

  Tensor<S> forward(const Tensor<S>& x, Cache* cache) const {
    const Tensor<S> beta = effective_beta();
    const Tensor<S> gamma = effective_gamma();
    if (dir_ == GdnDirection::forward) {
      Tensor<S> y = detail::gdn_forward_core(x, beta, gamma, cache ? &cache->denom : nullptr);
      if (cache) cache->input = x;
      return y;
    }
    Tensor<S> out = detail::gdn_inverse_core(x, beta, gamma, kLayerMaxIters,
                                             detail::gdn_default_tol<S>(),
                                             cache ? &cache->iters : nullptr);
    if (cache) cache->input = x;
    return out;
  }

  Tensor<S> backward(const Tensor<S>& gy, const Cache& cache) {
    const Tensor<S> beta = effective_beta();
    const Tensor<S> gamma = effective_gamma();
    detail::GdnGrads<S> g =
        dir_ == GdnDirection::forward
            ? detail::gdn_forward_backward(cache.input, cache.denom, gamma, gy)
            : detail::gdn_inverse_backward(cache.input, cache.iters, beta, gamma, gy);
    // chain through the square-root storage
    for (int i = 0; i < channels_; ++i) grad_braw_[i] += S(2) * braw_[i] * g.beta[i];
    for (size_t i = 0; i < graw_.size(); ++i) grad_graw_[i] += S(2) * graw_[i] * g.gamma[i];
    return std::move(g.x);
  }

  void collect_params(const std::string& prefix, ParamList<S>& out) {
    out.push_back({prefix + ".beta", &braw_, &grad_braw_});
    out.push_back({prefix + ".gamma", &graw_, &grad_graw_});
  }

  int channels() const { return channels_; }
  GdnDirection direction() const { return dir_; }

  static constexpr int kLayerMaxIters = 10;

 private:
  int channels_ = 0;
  GdnDirection dir_ = GdnDirection::forward;
  Tensor<S> braw_, graw_, grad_braw_, grad_graw_;
};

}  // namespace secsemcom::nn
