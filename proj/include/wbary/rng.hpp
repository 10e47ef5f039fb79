// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace wbary {

// Counter-based generator: a splitmix64 hash of (seed, stream, counter).
// All randomness in the project flows from a single 64-bit seed through
// instances of this class; there is no ambient entropy.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), counter_(0) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (++counter_) +
                      0xbf58476d1ce4e5b9ULL * mix(stream_);
    return mix(z);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (pair cached)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  // positive weights summing to 1 (normalized exponentials)
  std::vector<double> simplex_weights(std::size_t n) {
    std::vector<double> w(n);
    double total = 0;
    for (auto& v : w) {
      v = -std::log(1.0 - uniform());
      v = v > 1e-12 ? v : 1e-12;
      total += v;
    }
    for (auto& v : w) v /= total;
    return w;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace wbary
