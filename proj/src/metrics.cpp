#include "secsemcom/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace secsemcom::metrics {

namespace {

constexpr int kWin = 11;
constexpr double kWinSigma = 1.5;

void check_pair(const Image& a, const Image& b, const char* where) {
  if (a.h != b.h || a.w != b.w || a.c != b.c)
    throw std::invalid_argument(std::string(where) + ": shape mismatch");
  if (a.h <= 0) throw std::invalid_argument(std::string(where) + ": empty image");
}

double ssim_formula(double mu_a, double mu_b, double var_a, double var_b, double cov) {
  return ((2.0 * mu_a * mu_b + kSsimC1) * (2.0 * cov + kSsimC2)) /
         ((mu_a * mu_a + mu_b * mu_b + kSsimC1) * (var_a + var_b + kSsimC2));
}

std::vector<double> gaussian_window() {
  std::vector<double> g(kWin);
  double sum = 0.0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - (kWin - 1) / 2.0;
    g[i] = std::exp(-d * d / (2.0 * kWinSigma * kWinSigma));
    sum += g[i];
  }
  for (double& x : g) x /= sum;
  return g;
}

// Separable valid-region filter of one channel; input is h*w doubles.
void filter_valid(const std::vector<double>& in, int h, int w, const std::vector<double>& k,
                  std::vector<double>& out) {
  const int oh = h - kWin + 1, ow = w - kWin + 1;
  static thread_local std::vector<double> tmp;
  tmp.assign(static_cast<size_t>(h) * ow, 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      const double* row = in.data() + static_cast<size_t>(y) * w + x;
      for (int i = 0; i < kWin; ++i) acc += k[i] * row[i];
      tmp[static_cast<size_t>(y) * ow + x] = acc;
    }
  out.assign(static_cast<size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kWin; ++i) acc += k[i] * tmp[static_cast<size_t>(y + i) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = acc;
    }
}

double mse(const Image& a, const Image& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    const double d = static_cast<double>(a.v[i]) - b.v[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.v.size());
}

}  // namespace

double ssim_global(const Image& s, const Image& s_hat) {
  check_pair(s, s_hat, "ssim_global");
  const double n = static_cast<double>(s.h) * s.w;
  double total = 0.0;
  for (int ch = 0; ch < s.c; ++ch) {
    double sum_a = 0.0, sum_b = 0.0, sum_aa = 0.0, sum_bb = 0.0, sum_ab = 0.0;
    for (int y = 0; y < s.h; ++y)
      for (int x = 0; x < s.w; ++x) {
        const double a = s.at(y, x, ch);
        const double b = s_hat.at(y, x, ch);
        sum_a += a;
        sum_b += b;
        sum_aa += a * a;
        sum_bb += b * b;
        sum_ab += a * b;
      }
    const double mu_a = sum_a / n, mu_b = sum_b / n;
    const double var_a = sum_aa / n - mu_a * mu_a;
    const double var_b = sum_bb / n - mu_b * mu_b;
    const double cov = sum_ab / n - mu_a * mu_b;
    total += ssim_formula(mu_a, mu_b, var_a, var_b, cov);
  }
  return total / s.c;
}

double ssim_windowed(const Image& s, const Image& s_hat) {
  check_pair(s, s_hat, "ssim_windowed");
  if (s.h < kWin || s.w < kWin) {
    static bool warned = false;
    if (!warned) {
      std::fprintf(stderr,
                   "ssim_windowed: image %dx%d smaller than %dx%d window, "
                   "falling back to global SSIM\n",
                   s.h, s.w, kWin, kWin);
      warned = true;
    }
    return ssim_global(s, s_hat);
  }
  static const std::vector<double> kernel = gaussian_window();
  const int oh = s.h - kWin + 1, ow = s.w - kWin + 1;
  std::vector<double> a(static_cast<size_t>(s.h) * s.w), b(a.size()), aa(a.size()),
      bb(a.size()), ab(a.size());
  std::vector<double> mu_a, mu_b, m_aa, m_bb, m_ab;
  double total = 0.0;
  for (int ch = 0; ch < s.c; ++ch) {
    for (int y = 0; y < s.h; ++y)
      for (int x = 0; x < s.w; ++x) {
        const size_t i = static_cast<size_t>(y) * s.w + x;
        a[i] = s.at(y, x, ch);
        b[i] = s_hat.at(y, x, ch);
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
      }
    filter_valid(a, s.h, s.w, kernel, mu_a);
    filter_valid(b, s.h, s.w, kernel, mu_b);
    filter_valid(aa, s.h, s.w, kernel, m_aa);
    filter_valid(bb, s.h, s.w, kernel, m_bb);
    filter_valid(ab, s.h, s.w, kernel, m_ab);
    double acc = 0.0;
    for (size_t i = 0; i < mu_a.size(); ++i) {
      const double var_a = m_aa[i] - mu_a[i] * mu_a[i];
      const double var_b = m_bb[i] - mu_b[i] * mu_b[i];
      const double cov = m_ab[i] - mu_a[i] * mu_b[i];
      acc += ssim_formula(mu_a[i], mu_b[i], var_a, var_b, cov);
    }
    total += acc / (static_cast<double>(oh) * ow);
  }
  return total / s.c;
}

double psnr(const Image& s, const Image& s_hat) {
  check_pair(s, s_hat, "psnr");
  const double e = mse(s, s_hat);
  if (e <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / e));
}

std::pair<double, double> blackness(const Image& s_hat_e) {
  double sum = 0.0, sum2 = 0.0;
  for (float x : s_hat_e.v) {
    sum += x;
    sum2 += static_cast<double>(x) * x;
  }
  const double n = static_cast<double>(s_hat_e.v.size());
  return {sum / n, sum2 / n};
}

MetricReport metric_report(const Image& s, const Image& s_hat) {
  MetricReport r;
  r.ssim = ssim_windowed(s, s_hat);
  r.psnr_db = psnr(s, s_hat);
  r.mean_intensity = blackness(s_hat).first;
  return r;
}

}  // namespace secsemcom::metrics
