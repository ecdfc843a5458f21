#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secsemcom/rng.hpp"
#include "secsemcom/tensor.hpp"

namespace secsemcom::channel {

enum class ChannelKind { awgn, miso_mrt };

inline std::string to_string(ChannelKind k) {
  return k == ChannelKind::awgn ? "awgn" : "miso_mrt";
}
inline ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "awgn") return ChannelKind::awgn;
  if (s == "miso_mrt") return ChannelKind::miso_mrt;
  throw std::invalid_argument("unknown channel kind '" + s + "' (awgn|miso_mrt)");
}

struct ChannelConfig {
  ChannelKind kind = ChannelKind::awgn;
  double snr_bob_db = 10.0;        // transmit SNR at Bob, 10*log10(p / sigma_b^2)
  double eve_noise_ratio_db = 15.0;  // P = sigma_e^2 / sigma_b^2, in dB
  int antennas = 8;                // MISO only
  uint64_t noise_seed = 0;

  static ChannelConfig awgn_default() { return ChannelConfig{}; }
  static ChannelConfig miso_default() {
    ChannelConfig c;
    c.kind = ChannelKind::miso_mrt;
    c.eve_noise_ratio_db = 0.0;
    c.antennas = 8;
    return c;
  }
  // Noiseless pass-through (pretraining's ideal transmission).
  static ChannelConfig ideal() {
    ChannelConfig c;
    c.snr_bob_db = std::numeric_limits<double>::infinity();
    return c;
  }

  void validate() const {
    if (kind == ChannelKind::miso_mrt && antennas < 1)
      throw std::invalid_argument("channel config: antennas must be >= 1");
  }

  double eve_noise_ratio_linear() const { return std::pow(10.0, eve_noise_ratio_db / 10.0); }
};

// sigma^2 = p / 10^(snr_db/10); an infinite SNR gives exactly zero noise.
inline double snr_to_noise_power(double snr_db, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("snr_to_noise_power: p must be positive");
  return p * std::pow(10.0, -snr_db / 10.0);
}

// y = x + sigma * n with n ~ N(0, I). The noise draw carries no gradient;
// the channel's backward map is the identity on the x path.
template <typename S>
Tensor<S> add_awgn(const Tensor<S>& x, double sigma2, RngStream& rng) {
  Tensor<S> y = x;
  if (sigma2 == 0.0) return y;
  const double sigma = std::sqrt(sigma2);
  for (size_t i = 0; i < y.size(); ++i)
    y[i] += static_cast<S>(sigma * rng.normal());
  return y;
}

// Legitimate/wiretap AWGN pair: y_b = x + n_b, y_e = x + n_e with
// sigma_e^2 = P * sigma_b^2 and independent draws.
template <typename S>
std::pair<Tensor<S>, Tensor<S>> awgn_pair(const Tensor<S>& x, double p,
                                          const ChannelConfig& cfg, RngStream& rng) {
  if (cfg.kind != ChannelKind::awgn)
    throw std::invalid_argument("awgn_pair: channel kind is not awgn");
  const double sigma_b2 = snr_to_noise_power(cfg.snr_bob_db, p);
  const double sigma_e2 = cfg.eve_noise_ratio_linear() * sigma_b2;
  Tensor<S> yb = add_awgn(x, sigma_b2, rng);
  Tensor<S> ye = add_awgn(x, sigma_e2, rng);
  return {std::move(yb), std::move(ye)};
}

struct ChannelRealization {
  std::vector<std::complex<double>> h_b;
  std::vector<std::complex<double>> h_e;
  std::complex<double> alpha_e;  // (h_e^H h_b) / ||h_b||^2, Eve's effective gain under MRT
};

// MRT precoder v = h_b / ||h_b||^2, so that h_b^H v = 1.
inline std::vector<std::complex<double>> mrt_precoder(
    const std::vector<std::complex<double>>& h_b) {
  double n2 = 0.0;
  for (const auto& h : h_b) n2 += std::norm(h);
  if (n2 == 0.0) throw std::domain_error("mrt_precoder: zero channel vector");
  std::vector<std::complex<double>> v(h_b.size());
  for (size_t i = 0; i < h_b.size(); ++i) v[i] = h_b[i] / n2;
  return v;
}

inline std::complex<double> effective_eve_gain(const std::vector<std::complex<double>>& h_b,
                                               const std::vector<std::complex<double>>& h_e) {
  const auto v = mrt_precoder(h_b);
  std::complex<double> alpha(0.0, 0.0);
  for (size_t i = 0; i < h_e.size(); ++i) alpha += std::conj(h_e[i]) * v[i];
  return alpha;
}

// Rayleigh fading: entries i.i.d. circularly-symmetric complex Gaussian with
// unit variance, Bob and Eve independent.
inline ChannelRealization sample_miso_realization(int antennas, RngStream& rng) {
  if (antennas < 1) throw std::invalid_argument("sample_miso_realization: antennas < 1");
  ChannelRealization r;
  r.h_b.resize(antennas);
  r.h_e.resize(antennas);
  for (auto& h : r.h_b) h = rng.complex_normal_unit();
  for (auto& h : r.h_e) h = rng.complex_normal_unit();
  r.alpha_e = effective_eve_gain(r.h_b, r.h_e);
  return r;
}

// Eve's MISO path: consecutive real latent entries (2k, 2k+1) form one
// complex symbol, which is scaled by alpha_e and perturbed by complex noise
// with variance sigma_e^2 per real component, then unpacked. This keeps the
// per-real-symbol noise density equal to the AWGN case so that Eve's
// per-symbol SNR is |alpha_e|^2 * p / sigma_e^2.
template <typename S>
Tensor<S> miso_eve_apply(const Tensor<S>& x, std::complex<double> alpha, double sigma_e2,
                         RngStream& rng) {
  if (x.item_size() % 2 != 0)
    throw std::invalid_argument("miso_eve_apply: latent dimension must be even");
  const double a = alpha.real(), b = alpha.imag();
  const double sigma = std::sqrt(sigma_e2);
  Tensor<S> y = Tensor<S>::zeros_like(x);
  for (size_t i = 0; i + 1 < x.size(); i += 2) {
    const double re = a * x[i] - b * x[i + 1];
    const double im = b * x[i] + a * x[i + 1];
    y[i] = static_cast<S>(re + sigma * rng.normal());
    y[i + 1] = static_cast<S>(im + sigma * rng.normal());
  }
  return y;
}

template <typename S>
Tensor<S> miso_eve_backward(const Tensor<S>& g, std::complex<double> alpha) {
  const double a = alpha.real(), b = alpha.imag();
  Tensor<S> gx = Tensor<S>::zeros_like(g);
  for (size_t i = 0; i + 1 < g.size(); i += 2) {
    gx[i] = static_cast<S>(a * g[i] + b * g[i + 1]);
    gx[i + 1] = static_cast<S>(-b * g[i] + a * g[i + 1]);
  }
  return gx;
}

// MISO pair after MRT precoding: Bob's effective channel is the identity,
// Eve sees the fading coefficient alpha_e.
template <typename S>
std::pair<Tensor<S>, Tensor<S>> miso_pair(const Tensor<S>& x, const ChannelRealization& real,
                                          double p, const ChannelConfig& cfg, RngStream& rng) {
  if (cfg.kind != ChannelKind::miso_mrt)
    throw std::invalid_argument("miso_pair: channel kind is not miso_mrt");
  const double sigma_b2 = snr_to_noise_power(cfg.snr_bob_db, p);
  const double sigma_e2 = cfg.eve_noise_ratio_linear() * sigma_b2;
  Tensor<S> yb = add_awgn(x, sigma_b2, rng);
  Tensor<S> ye = miso_eve_apply(x, real.alpha_e, sigma_e2, rng);
  return {std::move(yb), std::move(ye)};
}

}  // namespace secsemcom::channel
