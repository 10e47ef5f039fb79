// SPDX-License-Identifier: Apache-2.0
#include "wbary/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace wbary {

int max_threads() {
  static int cached = [] {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("WBARY_THREADS")) {
      try {
        int cap = std::stoi(env);
        if (cap >= 1) n = std::min(n, cap);
      } catch (...) {
      }
    }
    return n;
  }();
  return cached;
}

namespace detail {

void omp_run(std::size_t n, void* ctx, void (*body)(void*, std::size_t)) {
  const long long count = static_cast<long long>(n);
  // keep scheduling overhead negligible for cheap bodies while still
  // balancing irregular ones (e.g. per-tuple descent solves)
  const long long chunk =
      std::max(1LL, count / (64LL * std::max(1, max_threads())));
#pragma omp parallel for schedule(dynamic, chunk) num_threads(max_threads())
  for (long long i = 0; i < count; ++i) {
    body(ctx, static_cast<std::size_t>(i));
  }
}

}  // namespace detail
}  // namespace wbary
