#pragma once

#include <cstdint>
#include <vector>

#include <random>

namespace geosom {

// Deterministic random source. std::mt19937_64 has a portable, standardised
// output sequence, but the std distributions wrapped around it do not, so
// this class derives uniforms and index draws from raw engine output
// directly. Given the same seed, every draw is identical on every platform,
// which is what makes pipeline runs byte-for-byte reproducible.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased
  // for any n, unlike the usual modulo shortcut.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % span);
  }

  // Fisher-Yates shuffle, consuming one index draw per element.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n), selection-sampling (Knuth 3.4.2 S):
  // scans 0..n-1 once, keeps order ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    std::size_t remaining = n;
    std::size_t needed = k;
    for (std::size_t i = 0; i < n && needed > 0; ++i) {
      if (uniform01() * static_cast<double>(remaining) <
          static_cast<double>(needed)) {
        out.push_back(i);
        --needed;
      }
      --remaining;
    }
    return out;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace geosom
