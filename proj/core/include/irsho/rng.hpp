#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "irsho/mathx.hpp"

// Counter-based random number generation (Philox 4x32-10). Every simulation
// trial owns an independent stream keyed by (seed, stream id), so results are
// bit-reproducible regardless of scheduling and trials can be replayed in
// isolation. The Poisson sampler is implemented here rather than taken from
// <random> because the standard distribution algorithms are
// implementation-defined and would tie logged results to one libstdc++.
namespace irsho {

class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    ctr_ = {0, 0, static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    if (pos_ >= 4) refill();
    const std::uint64_t lo = buf_[pos_], hi = buf_[pos_ + 1];
    pos_ += 2;
    return lo | (hi << 32);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double u01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

 private:
  static void round(std::array<std::uint32_t, 4>& c,
                    const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = 0xD2511F53ULL * c[0];
    const std::uint64_t p1 = 0xCD9E8D57ULL * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  void refill() {
    std::array<std::uint32_t, 4> c = ctr_;
    std::array<std::uint32_t, 2> k = key_;
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {  // Weyl key schedule
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      round(c, k);
    }
    for (int i = 0; i < 4; ++i) buf_[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
    pos_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter, never wraps in practice
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Exact Poisson sampler: Knuth's product method, with large means split into
// independent chunks (Poisson(m) = sum of k Poisson(m/k)) so the product never
// underflows. Platform-independent given the Philox stream.
inline int poisson(Philox& g, double mean) {
  if (!(mean > 0.0)) return 0;
  int total = 0;
  int chunks = 1;
  if (mean > 30.0) chunks = static_cast<int>(mean / 30.0) + 1;
  const double m = mean / chunks;
  const double limit = std::exp(-m);
  for (int c = 0; c < chunks; ++c) {
    double prod = 1.0;
    int k = -1;
    do {
      prod *= g.u01();
      ++k;
    } while (prod > limit);
    total += k;
  }
  return total;
}

// Homogeneous Poisson point process on an axis-aligned rectangle.
inline std::vector<Vec2> ppp_rect(Philox& g, double density, double x_lo,
                                  double x_hi, double y_lo, double y_hi) {
  std::vector<Vec2> pts;
  const double area = (x_hi - x_lo) * (y_hi - y_lo);
  if (area <= 0.0 || density <= 0.0) return pts;
  const int n = poisson(g, density * area);
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = g.uniform(x_lo, x_hi);
    const double y = g.uniform(y_lo, y_hi);
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace irsho
