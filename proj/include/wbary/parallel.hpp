// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace wbary {

// Execution mode for the data-parallel kernels. Every kernel has a serial
// reference path that produces bitwise-identical results; tests compare them.
enum class Exec { serial, openmp };

// Thread cap, honoring the WBARY_THREADS environment variable.
int max_threads();

namespace detail {
void omp_run(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

// Runs body(i) for i in [0, n). Parallel mode uses OpenMP with a dynamic
// schedule; bodies must write to disjoint slots so reductions stay
// deterministic (reduce serially afterwards).
template <class F>
void for_each_index(std::size_t n, Exec mode, F&& body) {
  if (mode == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  detail::omp_run(n, &body, [](void* ctx, std::size_t i) {
    (*static_cast<F*>(ctx))(i);
  });
}

}  // namespace wbary
