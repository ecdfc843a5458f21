#include "secsemcom/harness/render.hpp"

#include <algorithm>

#include <opencv2/imgcodecs.hpp>

namespace secsemcom::harness {

using channel::ChannelKind;

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == '/' || c == '\\' || c == ' ') c = '_';
  return s;
}

void paste(cv::Mat& canvas, const Image& img, int x0) {
  for (int y = 0; y < img.h; ++y) {
    cv::Vec3b* row = canvas.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.w; ++x) {
      const auto q = [&](int ch) {
        return static_cast<uchar>(
            std::clamp(std::lround(img.at(y, x, ch) * 255.0f), 0L, 255L));
      };
      row[x0 + x] = cv::Vec3b(q(2), q(1), q(0));  // BGR
    }
  }
}

}  // namespace

std::vector<std::filesystem::path> render_examples(codec::Codec<float>& model,
                                                   const channel::ChannelConfig& chan,
                                                   double power,
                                                   const dataset::DatasetSplit& split,
                                                   const RenderRequest& req) {
  const double sigma_b2 = channel::snr_to_noise_power(req.snr_db, power);
  const double sigma_e2 = chan.eve_noise_ratio_linear() * sigma_b2;
  std::filesystem::create_directories(req.out_dir);

  std::vector<std::filesystem::path> files;
  for (const std::string& id : req.image_ids) {
    const auto it = std::find_if(split.samples.begin(), split.samples.end(),
                                 [&](const auto& s) { return s.source_id == id; });
    if (it == split.samples.end()) {
      std::string known;
      for (size_t i = 0; i < std::min<size_t>(8, split.samples.size()); ++i)
        known += (i ? ", " : "") + split.samples[i].source_id;
      throw dataset::DataError("unknown image_id '" + id + "'; valid ids look like: " + known +
                               ", ... (" + std::to_string(split.samples.size()) + " total)");
    }
    const Image& src = it->pixels;
    Tensor<float> batch(1, src.c, src.h, src.w);
    image_into_tensor(src, batch, 0);

    RngStream noise_rng(RngStream::derive_seed(req.seed, "render-noise",
                                               RngStream::fnv1a(id)));
    Tensor<float> z = model.encoder.forward(batch, nullptr);
    Tensor<float> x = codec::power_normalize(z, power);
    Tensor<float> y_b = channel::add_awgn(x, sigma_b2, noise_rng);
    Tensor<float> y_e;
    if (chan.kind == ChannelKind::miso_mrt) {
      RngStream fading_rng(RngStream::derive_seed(req.seed, "render-fading",
                                                  RngStream::fnv1a(id)));
      const auto realization = channel::sample_miso_realization(chan.antennas, fading_rng);
      y_e = channel::miso_eve_apply(x, realization.alpha_e, sigma_e2, noise_rng);
    } else {
      y_e = channel::add_awgn(x, sigma_e2, noise_rng);
    }
    const Image bob = image_from_tensor(model.decoder.forward(y_b, nullptr), 0);
    const Image eve = image_from_tensor(model.decoder.forward(y_e, nullptr), 0);

    cv::Mat canvas(src.h, src.w * 3, CV_8UC3);
    paste(canvas, src, 0);
    paste(canvas, bob, src.w);
    paste(canvas, eve, src.w * 2);

    char snr_txt[32];
    std::snprintf(snr_txt, sizeof(snr_txt), "%g", req.snr_db);
    const std::filesystem::path file =
        req.out_dir /
        (sanitize(req.run_id) + "_snr" + snr_txt + "dB_" + sanitize(id) + ".png");
    if (!cv::imwrite(file.string(), canvas))
      throw std::runtime_error("failed to write panel: " + file.string());
    files.push_back(file);
  }
  return files;
}

}  // namespace secsemcom::harness
