#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace secsemcom {

// Deterministic random stream with cheap labeled splitting.
//
// All randomness in the project (parameter init, shuffling, channel noise,
// fading) is drawn from streams derived from one master seed via
// child("label") chains, so every run is replayable from its RunRecord and
// independent streams never alias. The generator is xoshiro256++ seeded
// through splitmix64; sampling is hand-rolled (Box-Muller for normals) so
// sequences do not depend on the standard library's distribution
// implementations.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) { seed_state(seed); }
  RngStream(uint64_t master, std::string_view label) {
    seed_state(splitmix(master ^ fnv1a(label)));
  }

  RngStream child(std::string_view label) const {
    return RngStream(state_fingerprint(), label);
  }
  RngStream child(std::string_view label, uint64_t index) const {
    return RngStream(state_fingerprint() ^ splitmix(index + 0x9e3779b97f4a7c15ull), label);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
  }

  // Standard normal via Box-Muller, pair-cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_normal_unit() {
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    return {normal() * inv_sqrt2, normal() * inv_sqrt2};
  }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
    return h;
  }

  // Stable seed for a labeled sub-stream; used by the harness to keep
  // training, evaluation and rendering noise streams disjoint.
  static uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t index = 0) {
    return splitmix(master ^ fnv1a(label) ^ splitmix(index + 0x632be59bd9b4e019ull));
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  void seed_state(uint64_t seed) {
    uint64_t x = seed;
    for (auto& s : s_) {
      x = splitmix(x);
      s = x;
    }
  }

  // Deterministic identity of the stream for child derivation; does not
  // advance the stream.
  uint64_t state_fingerprint() const {
    return splitmix(s_[0]) ^ splitmix(s_[1] + 1) ^ splitmix(s_[2] + 2) ^ splitmix(s_[3] + 3);
  }

  uint64_t s_[4] = {};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace secsemcom
