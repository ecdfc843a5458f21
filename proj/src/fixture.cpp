#include "secsemcom/fixture.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>

namespace secsemcom::fixture {

using dataset::ClassLabel;

namespace {

struct Rgb {
  float r, g, b;
};

Rgb hsv(float h, float s, float v) {
  h = h - std::floor(h);
  const float i = std::floor(h * 6.0f);
  const float f = h * 6.0f - i;
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - f * s);
  const float t = v * (1.0f - (1.0f - f) * s);
  switch (static_cast<int>(i) % 6) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

float smoothstep(float e0, float e1, float x) {
  const float t = std::clamp((x - e0) / (e1 - e0), 0.0f, 1.0f);
  return t * t * (3.0f - 2.0f * t);
}

void fill_gradient(Image& img, const Rgb& c0, const Rgb& c1, float angle) {
  const float dx = std::cos(angle), dy = std::sin(angle);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      const float u = 0.5f + 0.5f * ((x / (img.w - 1.0f) - 0.5f) * dx +
                                     (y / (img.h - 1.0f) - 0.5f) * dy);
      img.at(y, x, 0) = c0.r + (c1.r - c0.r) * u;
      img.at(y, x, 1) = c0.g + (c1.g - c0.g) * u;
      img.at(y, x, 2) = c0.b + (c1.b - c0.b) * u;
    }
}

void blend(Image& img, int y, int x, const Rgb& c, float a) {
  img.at(y, x, 0) += a * (c.r - img.at(y, x, 0));
  img.at(y, x, 1) += a * (c.g - img.at(y, x, 1));
  img.at(y, x, 2) += a * (c.b - img.at(y, x, 2));
}

void draw_ellipse(Image& img, float cx, float cy, float rx, float ry, float rot,
                  const Rgb& c, float edge) {
  const float cr = std::cos(rot), sr = std::sin(rot);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      const float px = x - cx, py = y - cy;
      const float u = (px * cr + py * sr) / rx;
      const float v = (-px * sr + py * cr) / ry;
      const float d = std::sqrt(u * u + v * v);
      const float a = 1.0f - smoothstep(1.0f - edge, 1.0f + edge, d);
      if (a > 0.0f) blend(img, y, x, c, a);
    }
}

void draw_petals(Image& img, float cx, float cy, float radius, int petals, float rot,
                 const Rgb& c) {
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      const float px = x - cx, py = y - cy;
      const float r = std::sqrt(px * px + py * py);
      const float th = std::atan2(py, px);
      const float rmax = radius * (0.55f + 0.45f * std::cos(petals * th + rot));
      const float a = 1.0f - smoothstep(rmax - 2.0f, rmax + 2.0f, r);
      if (a > 0.0f) blend(img, y, x, c, a);
    }
}

void draw_plaid(Image& img, float fx, float fy, float phase, const Rgb& c, float strength) {
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      const float a =
          strength * 0.5f *
          (1.0f + std::sin(fx * x / img.w * 2.0f * float(M_PI) + phase) *
                      std::sin(fy * y / img.h * 2.0f * float(M_PI) + phase));
      blend(img, y, x, c, a);
    }
}

Rgb class_color(ClassLabel label, RngStream& rng, float s_lo = 0.45f, float v_lo = 0.5f) {
  float hue = 0.0f;
  switch (label) {
    case ClassLabel::berry: hue = 0.93f + 0.1f * float(rng.uniform()); break;   // red/purple
    case ClassLabel::bird: hue = 0.52f + 0.12f * float(rng.uniform()); break;   // cyan/blue
    case ClassLabel::dog: hue = 0.05f + 0.07f * float(rng.uniform()); break;    // browns
    case ClassLabel::flower: hue = 0.78f + 0.16f * float(rng.uniform()); break; // magenta
    case ClassLabel::other: hue = float(rng.uniform()); break;
  }
  return hsv(hue, s_lo + 0.4f * float(rng.uniform()), v_lo + 0.45f * float(rng.uniform()));
}

}  // namespace

Image synth_image(ClassLabel label, int size, RngStream& rng) {
  Image img(size, size, 3);
  const Rgb bg0 = class_color(label, rng, 0.15f, 0.35f);
  const Rgb bg1 = class_color(label, rng, 0.15f, 0.35f);
  fill_gradient(img, bg0, bg1, float(rng.uniform(0.0, 2.0 * M_PI)));

  const float cx = size * float(rng.uniform(0.35, 0.65));
  const float cy = size * float(rng.uniform(0.35, 0.65));
  switch (label) {
    case ClassLabel::berry: {
      const int n = 2 + rng.uniform_int(3);
      for (int i = 0; i < n; ++i) {
        const Rgb c = class_color(label, rng);
        const float r = size * float(rng.uniform(0.10, 0.22));
        draw_ellipse(img, size * float(rng.uniform(0.2, 0.8)),
                     size * float(rng.uniform(0.2, 0.8)), r, r, 0.0f, c, 0.12f);
      }
      break;
    }
    case ClassLabel::bird: {
      const Rgb body = class_color(label, rng);
      const float rx = size * float(rng.uniform(0.18, 0.30));
      draw_ellipse(img, cx, cy, rx, rx * 0.6f, float(rng.uniform(-0.5, 0.5)), body, 0.10f);
      draw_ellipse(img, cx + rx * 0.9f, cy - rx * 0.45f, rx * 0.35f, rx * 0.35f, 0.0f, body,
                   0.15f);
      break;
    }
    case ClassLabel::dog: {
      const Rgb body = class_color(label, rng);
      const Rgb head = class_color(label, rng);
      const float rx = size * float(rng.uniform(0.20, 0.32));
      draw_ellipse(img, cx, cy + rx * 0.3f, rx, rx * 0.7f, float(rng.uniform(-0.3, 0.3)),
                   body, 0.10f);
      draw_ellipse(img, cx - rx * 0.2f, cy - rx * 0.55f, rx * 0.5f, rx * 0.5f, 0.0f, head,
                   0.12f);
      break;
    }
    case ClassLabel::flower: {
      const Rgb petals = class_color(label, rng);
      const Rgb center = class_color(ClassLabel::dog, rng);
      draw_petals(img, cx, cy, size * float(rng.uniform(0.25, 0.40)), 4 + rng.uniform_int(4),
                  float(rng.uniform(0.0, 2.0 * M_PI)), petals);
      const float rc = size * float(rng.uniform(0.06, 0.12));
      draw_ellipse(img, cx, cy, rc, rc, 0.0f, center, 0.2f);
      break;
    }
    case ClassLabel::other: {
      draw_plaid(img, float(rng.uniform(1.0, 3.0)), float(rng.uniform(1.0, 3.0)),
                 float(rng.uniform(0.0, 6.28)), class_color(label, rng), 0.8f);
      break;
    }
  }
  for (float& v : img.v) v = std::clamp(v, 0.0f, 1.0f);
  return img;
}

void synth_corpus(const std::filesystem::path& root, const FixtureSpec& spec) {
  namespace fs = std::filesystem;
  RngStream master(spec.seed, "fixture-corpus");
  for (int ci = 0; ci < dataset::kNumClasses; ++ci) {
    const auto label = static_cast<ClassLabel>(ci);
    const std::string cname = dataset::to_string(label);
    for (const bool train : {true, false}) {
      const fs::path dir = root / (train ? "train" : "test") / cname;
      fs::create_directories(dir);
      const int count = train ? spec.train_per_class : spec.test_per_class;
      for (int i = 0; i < count; ++i) {
        RngStream rng = master.child(cname + (train ? "/train" : "/test"), i);
        const Image img = synth_image(label, spec.image_size, rng);
        cv::Mat mat(img.h, img.w, CV_8UC3);
        for (int y = 0; y < img.h; ++y) {
          cv::Vec3b* row = mat.ptr<cv::Vec3b>(y);
          for (int x = 0; x < img.w; ++x) {
            row[x][2] = static_cast<uchar>(std::lround(img.at(y, x, 0) * 255.0f));
            row[x][1] = static_cast<uchar>(std::lround(img.at(y, x, 1) * 255.0f));
            row[x][0] = static_cast<uchar>(std::lround(img.at(y, x, 2) * 255.0f));
          }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "img%04d.png", i);
        if (!cv::imwrite((dir / name).string(), mat))
          throw std::runtime_error("failed to write " + (dir / name).string());
      }
    }
  }
}

}  // namespace secsemcom::fixture
