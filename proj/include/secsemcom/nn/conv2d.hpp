#pragma once

#include <cmath>
#include <omp.h>

#include "secsemcom/nn/param.hpp"
#include "secsemcom/rng.hpp"
#include "secsemcom/tensor.hpp"

namespace secsemcom::nn {

// Plain im2col + GEMM convolution, NCHW, square kernel.
// im2col buffers are rebuilt in the backward pass instead of cached; the
// cache keeps only the layer input.
template <typename S>
class Conv2d {
 public:
  struct Cache {
    Tensor<S> input;
  };

  Conv2d() = default;
  Conv2d(int in_ch, int out_ch, int ksize, int stride, int pad)
      : in_ch_(in_ch), out_ch_(out_ch), ksize_(ksize), stride_(stride), pad_(pad) {
    if (in_ch <= 0 || out_ch <= 0 || ksize <= 0 || stride <= 0 || pad < 0)
      throw std::invalid_argument("Conv2d: non-positive dimension");
    weight_ = Tensor<S>(out_ch, in_ch, ksize, ksize);
    bias_ = Tensor<S>(out_ch, 1, 1, 1);
    grad_weight_ = Tensor<S>::zeros_like(weight_);
    grad_bias_ = Tensor<S>::zeros_like(bias_);
  }

  void init(RngStream& rng) {
    // He fan-in scaling; biases start at zero.
    const double stddev = std::sqrt(2.0 / (static_cast<double>(in_ch_) * ksize_ * ksize_));
    for (size_t i = 0; i < weight_.size(); ++i)
      weight_[i] = static_cast<S>(rng.normal() * stddev);
    bias_.set_zero();
  }

  int out_h(int h) const { return (h + 2 * pad_ - ksize_) / stride_ + 1; }
  int out_w(int w) const { return (w + 2 * pad_ - ksize_) / stride_ + 1; }
  int in_channels() const { return in_ch_; }
  int out_channels() const { return out_ch_; }

  Tensor<S> forward(const Tensor<S>& x, Cache* cache) const {
    if (x.c() != in_ch_)
      throw std::invalid_argument("Conv2d: expected " + std::to_string(in_ch_) +
                                  " input channels, got " + std::to_string(x.c()));
    const int oh = out_h(x.h()), ow = out_w(x.w());
    if (oh <= 0 || ow <= 0) throw std::invalid_argument("Conv2d: empty output");
    Tensor<S> y(x.n(), out_ch_, oh, ow);

    const int K = in_ch_ * ksize_ * ksize_;
    const Eigen::Index P = static_cast<Eigen::Index>(oh) * ow;
    typename Tensor<S>::ConstMapRM wmat(weight_.data(), out_ch_, K);

#pragma omp parallel
    {
      typename Tensor<S>::MatRM cols(K, P);
#pragma omp for schedule(static)
      for (int b = 0; b < x.n(); ++b) {
        im2col(x, b, cols);
        typename Tensor<S>::MapRM ymat(y.item(b), out_ch_, P);
        ymat.noalias() = wmat * cols;
        for (int oc = 0; oc < out_ch_; ++oc) ymat.row(oc).array() += bias_[oc];
      }
    }
    if (cache) cache->input = x;
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const Cache& cache) {
    const Tensor<S>& x = cache.input;
    const int oh = out_h(x.h()), ow = out_w(x.w());
    Tensor<S> gx(x.n(), x.c(), x.h(), x.w());

    const int K = in_ch_ * ksize_ * ksize_;
    const Eigen::Index P = static_cast<Eigen::Index>(oh) * ow;
    typename Tensor<S>::ConstMapRM wmat(weight_.data(), out_ch_, K);

    const int nthreads = omp_get_max_threads();
    std::vector<Tensor<S>> gw_local(nthreads, Tensor<S>::zeros_like(weight_));
    std::vector<Tensor<S>> gb_local(nthreads, Tensor<S>::zeros_like(bias_));

#pragma omp parallel
    {
      const int tid = omp_get_thread_num();
      typename Tensor<S>::MatRM cols(K, P), gcols(K, P);
      typename Tensor<S>::MapRM gw(gw_local[tid].data(), out_ch_, K);
#pragma omp for schedule(static)
      for (int b = 0; b < x.n(); ++b) {
        im2col(x, b, cols);
        typename Tensor<S>::ConstMapRM gymat(gy.item(b), out_ch_, P);
        gw.noalias() += gymat * cols.transpose();
        for (int oc = 0; oc < out_ch_; ++oc) gb_local[tid][oc] += gymat.row(oc).sum();
        gcols.noalias() = wmat.transpose() * gymat;
        col2im_add(gcols, gx, b);
      }
    }
    for (int t = 0; t < nthreads; ++t) {
      grad_weight_.vec() += gw_local[t].vec();
      grad_bias_.vec() += gb_local[t].vec();
    }
    return gx;
  }

  void collect_params(const std::string& prefix, ParamList<S>& out) {
    out.push_back({prefix + ".weight", &weight_, &grad_weight_});
    out.push_back({prefix + ".bias", &bias_, &grad_bias_});
  }

  Tensor<S>& weight() { return weight_; }
  Tensor<S>& bias() { return bias_; }

 private:
  void im2col(const Tensor<S>& x, int b, typename Tensor<S>::MatRM& cols) const {
    const int h = x.h(), w = x.w();
    const int oh = out_h(h), ow = out_w(w);
    for (int ic = 0; ic < in_ch_; ++ic) {
      for (int ky = 0; ky < ksize_; ++ky) {
        for (int kx = 0; kx < ksize_; ++kx) {
          S* row = cols.data() + (static_cast<size_t>(ic) * ksize_ * ksize_ +
                                  static_cast<size_t>(ky) * ksize_ + kx) *
                                     static_cast<size_t>(oh) * ow;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride_ - pad_ + ky;
            S* dst = row + static_cast<size_t>(oy) * ow;
            if (iy < 0 || iy >= h) {
              std::fill(dst, dst + ow, S(0));
              continue;
            }
            const S* src = &x.at(b, ic, iy, 0);
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride_ - pad_ + kx;
              dst[ox] = (ix >= 0 && ix < w) ? src[ix] : S(0);
            }
          }
        }
      }
    }
  }

  void col2im_add(const typename Tensor<S>::MatRM& gcols, Tensor<S>& gx, int b) const {
    const int h = gx.h(), w = gx.w();
    const int oh = out_h(h), ow = out_w(w);
    for (int ic = 0; ic < in_ch_; ++ic) {
      for (int ky = 0; ky < ksize_; ++ky) {
        for (int kx = 0; kx < ksize_; ++kx) {
          const S* row = gcols.data() + (static_cast<size_t>(ic) * ksize_ * ksize_ +
                                         static_cast<size_t>(ky) * ksize_ + kx) *
                                            static_cast<size_t>(oh) * ow;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride_ - pad_ + ky;
            if (iy < 0 || iy >= h) continue;
            const S* src = row + static_cast<size_t>(oy) * ow;
            S* dst = &gx.at(b, ic, iy, 0);
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride_ - pad_ + kx;
              if (ix >= 0 && ix < w) dst[ix] += src[ox];
            }
          }
        }
      }
    }
  }

  int in_ch_ = 0, out_ch_ = 0, ksize_ = 0, stride_ = 1, pad_ = 0;
  Tensor<S> weight_, bias_, grad_weight_, grad_bias_;
};

}  // namespace secsemcom::nn
