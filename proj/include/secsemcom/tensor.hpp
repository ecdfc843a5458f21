#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace secsemcom {

// Dense 4-d tensor in (n, c, h, w) order, row-major, w fastest.
// Parameter tensors use the same container with trailing dims set to 1:
// a bias over C channels is (C,1,1,1), a GDN mixing matrix is (C,C,1,1),
// a latent batch is (B,M,1,1).
template <typename S>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, int c, int h, int w) : n_(n), c_(c), h_(h), w_(w) {
    if (n < 0 || c < 0 || h < 0 || w < 0)
      throw std::invalid_argument("Tensor: negative dimension");
    v_.assign(static_cast<size_t>(n) * c * h * w, S(0));
  }

  static Tensor zeros_like(const Tensor& t) { return Tensor(t.n_, t.c_, t.h_, t.w_); }

  int n() const { return n_; }
  int c() const { return c_; }
  int h() const { return h_; }
  int w() const { return w_; }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  bool same_shape(const Tensor& o) const {
    return n_ == o.n_ && c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }
  std::string shape_str() const {
    return std::to_string(n_) + "x" + std::to_string(c_) + "x" +
           std::to_string(h_) + "x" + std::to_string(w_);
  }

  S* data() { return v_.data(); }
  const S* data() const { return v_.data(); }

  S& operator[](size_t i) { return v_[i]; }
  const S& operator[](size_t i) const { return v_[i]; }

  S& at(int in, int ic, int iy, int ix) {
    return v_[((static_cast<size_t>(in) * c_ + ic) * h_ + iy) * w_ + ix];
  }
  const S& at(int in, int ic, int iy, int ix) const {
    return v_[((static_cast<size_t>(in) * c_ + ic) * h_ + iy) * w_ + ix];
  }

  // Contiguous slice of one batch item: c*h*w values.
  S* item(int in) { return v_.data() + static_cast<size_t>(in) * c_ * h_ * w_; }
  const S* item(int in) const { return v_.data() + static_cast<size_t>(in) * c_ * h_ * w_; }
  size_t item_size() const { return static_cast<size_t>(c_) * h_ * w_; }

  void fill(S x) { std::fill(v_.begin(), v_.end(), x); }
  void set_zero() { fill(S(0)); }

  bool all_finite() const {
    for (S x : v_)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  using MatRM = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MapRM = Eigen::Map<MatRM>;
  using ConstMapRM = Eigen::Map<const MatRM>;
  using VecMap = Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, 1>>;
  using ConstVecMap = Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, 1>>;

  // Channels-by-pixels view of one batch item, rows are channels.
  MapRM item_mat(int in) { return MapRM(item(in), c_, static_cast<Eigen::Index>(h_) * w_); }
  ConstMapRM item_mat(int in) const {
    return ConstMapRM(item(in), c_, static_cast<Eigen::Index>(h_) * w_);
  }

  VecMap vec() { return VecMap(v_.data(), static_cast<Eigen::Index>(v_.size())); }
  ConstVecMap vec() const {
    return ConstVecMap(v_.data(), static_cast<Eigen::Index>(v_.size()));
  }

  template <typename T>
  Tensor<T> cast() const {
    Tensor<T> out(n_, c_, h_, w_);
    for (size_t i = 0; i < v_.size(); ++i) out[i] = static_cast<T>(v_[i]);
    return out;
  }

  // Reinterpret dims without moving data; total size must match.
  Tensor reshaped(int n, int c, int h, int w) && {
    if (static_cast<size_t>(n) * c * h * w != v_.size())
      throw std::invalid_argument("Tensor::reshaped: size mismatch");
    Tensor out;
    out.n_ = n;
    out.c_ = c;
    out.h_ = h;
    out.w_ = w;
    out.v_ = std::move(v_);
    return out;
  }
  Tensor reshaped(int n, int c, int h, int w) const& {
    Tensor copy = *this;
    return std::move(copy).reshaped(n, c, h, w);
  }

 private:
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
  std::vector<S> v_;
};

template <typename S>
inline void check_same_shape(const Tensor<S>& a, const Tensor<S>& b, const char* where) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(where) + ": shape mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
}

}  // namespace secsemcom
