#pragma once

#include "secsemcom/tensor.hpp"

namespace secsemcom::nn {

// Rearranges (N, C*r^2, H, W) -> (N, C, H*r, W*r).
// Block index within a channel group maps to the (dy, dx) sub-pixel offset:
// out(c, y*r+dy, x*r+dx) = in(c*r^2 + dy*r + dx, y, x).
template <typename S>
Tensor<S> pixel_shuffle(const Tensor<S>& x, int r) {
  if (r <= 0 || x.c() % (r * r) != 0)
    throw std::invalid_argument("pixel_shuffle: channels not divisible by r^2");
  const int oc = x.c() / (r * r);
  Tensor<S> y(x.n(), oc, x.h() * r, x.w() * r);
  for (int b = 0; b < x.n(); ++b)
    for (int c = 0; c < oc; ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx) {
          const int q = c * r * r + dy * r + dx;
          for (int iy = 0; iy < x.h(); ++iy) {
            const S* src = &x.at(b, q, iy, 0);
            S* dst = &y.at(b, c, iy * r + dy, dx);
            for (int ix = 0; ix < x.w(); ++ix) dst[ix * r] = src[ix];
          }
        }
  return y;
}

template <typename S>
Tensor<S> pixel_shuffle_backward(const Tensor<S>& gy, int r) {
  const int ic = gy.c() * r * r;
  Tensor<S> gx(gy.n(), ic, gy.h() / r, gy.w() / r);
  for (int b = 0; b < gy.n(); ++b)
    for (int c = 0; c < gy.c(); ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx) {
          const int q = c * r * r + dy * r + dx;
          for (int iy = 0; iy < gx.h(); ++iy) {
            const S* src = &gy.at(b, c, iy * r + dy, dx);
            S* dst = &gx.at(b, q, iy, 0);
            for (int ix = 0; ix < gx.w(); ++ix) dst[ix] = src[ix * r];
          }
        }
  return gx;
}

}  // namespace secsemcom::nn
