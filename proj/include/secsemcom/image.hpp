#pragma once

#include <stdexcept>
#include <vector>

#include "secsemcom/tensor.hpp"

namespace secsemcom {

// HWC float image, pixel values in [0,1].
struct Image {
  int h = 0, w = 0, c = 0;
  std::vector<float> v;

  Image() = default;
  Image(int h_, int w_, int c_) : h(h_), w(w_), c(c_) {
    if (h_ <= 0 || w_ <= 0 || c_ <= 0) throw std::invalid_argument("Image: bad shape");
    v.assign(static_cast<size_t>(h_) * w_ * c_, 0.0f);
  }

  float& at(int y, int x, int ch) { return v[(static_cast<size_t>(y) * w + x) * c + ch]; }
  float at(int y, int x, int ch) const { return v[(static_cast<size_t>(y) * w + x) * c + ch]; }
  size_t size() const { return v.size(); }
};

inline Image black_image(int h, int w, int c) { return Image(h, w, c); }

// HWC image -> one CHW item of a batch tensor.
inline void image_into_tensor(const Image& img, Tensor<float>& t, int item) {
  for (int ch = 0; ch < img.c; ++ch)
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) t.at(item, ch, y, x) = img.at(y, x, ch);
}

inline Image image_from_tensor(const Tensor<float>& t, int item) {
  Image img(t.h(), t.w(), t.c());
  for (int ch = 0; ch < img.c; ++ch)
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x) img.at(y, x, ch) = t.at(item, ch, y, x);
  return img;
}

}  // namespace secsemcom
