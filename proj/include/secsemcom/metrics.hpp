#pragma once

#include <optional>
#include <vector>

#include "secsemcom/image.hpp"

namespace secsemcom::metrics {

struct MetricReport {
  double ssim = 0.0;  // windowed SSIM, the headline metric
  double psnr_db = 0.0;
  double mean_intensity = 0.0;
  std::optional<std::vector<double>> per_image;
};

// SSIM stability constants with dynamic range L = 1.
inline constexpr double kSsimC1 = 0.01 * 0.01;  // (0.01 L)^2
inline constexpr double kSsimC2 = 0.03 * 0.03;  // (0.03 L)^2
inline constexpr double kPsnrCapDb = 99.0;

// SSIM with image-wide statistics, computed per channel and averaged.
double ssim_global(const Image& s, const Image& s_hat);

// Mean SSIM over 11x11 Gaussian windows (sigma = 1.5), valid region only,
// per channel, averaged. Falls back to ssim_global (with a one-time stderr
// warning) when the image is smaller than the window.
double ssim_windowed(const Image& s, const Image& s_hat);

// 10*log10(1/mse) with peak 1; identical images report the 99 dB cap.
double psnr(const Image& s, const Image& s_hat);

// (mean pixel value, per-pixel mean squared distance to the black image)
std::pair<double, double> blackness(const Image& s_hat_e);

MetricReport metric_report(const Image& s, const Image& s_hat);

}  // namespace secsemcom::metrics
