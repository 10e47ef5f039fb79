// SPDX-License-Identifier: Apache-2.0
//
// Times the serial reference path of each data-parallel kernel against the
// OpenMP path and prints the speedup. WBARY_THREADS caps the thread count.

#include <chrono>
#include <cstdio>

#include "wbary/gauge.hpp"
#include "wbary/instances.hpp"
#include "wbary/mmot.hpp"

using namespace wbary;

namespace {

template <class F>
double time_ms(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", max_threads());

  {
    // MMOT cost tensor on the sphere: one Fréchet solve per tuple
    ModelManifold m(ManifoldKind::Sphere, 2);
    CounterRng rng(7, 1);
    Point base = canonical_base(m);
    std::vector<DiscreteMeasure> mus;
    for (int i = 0; i < 3; ++i)
      mus.push_back(random_measure_ball(m, base, 0.6, 12, true, rng));
    std::vector<double> lambda{0.3, 0.3, 0.4};
    TupleCostTable serial, parallel;
    evaluate_tuple_costs(m, lambda, mus, Exec::serial);  // warmup
    double ts = time_ms([&] {
      serial = evaluate_tuple_costs(m, lambda, mus, Exec::serial);
    });
    double tp = time_ms([&] {
      parallel = evaluate_tuple_costs(m, lambda, mus, Exec::openmp);
    });
    bool match = serial.costs == parallel.costs;
    report("mmot_cost_tensor", ts, tp);
    if (!match) std::printf("  MISMATCH between serial and openmp!\n");
  }

  {
    // pairwise squared-distance matrix on the hyperboloid
    ModelManifold m(ManifoldKind::Hyperbolic, 3);
    CounterRng rng(11, 2);
    Point base = canonical_base(m);
    std::vector<Point> xs(400), ys(400);
    for (auto& p : xs) p = random_point_ball(m, base, 2.0, rng);
    for (auto& p : ys) p = random_point_ball(m, base, 2.0, rng);
    Mat a, b;
    squared_distance_matrix(m, xs, ys, Exec::serial);  // warmup
    double ts = time_ms(
        [&] { a = squared_distance_matrix(m, xs, ys, Exec::serial); });
    double tp = time_ms(
        [&] { b = squared_distance_matrix(m, xs, ys, Exec::openmp); });
    report("squared_distance_matrix", ts, tp);
    if (a != b) std::printf("  MISMATCH between serial and openmp!\n");
  }

  {
    // gauge functional over a large grid
    GridDensity f = gaussian_grid_density({-6.0, -6.0}, {6.0, 6.0},
                                          {512, 512}, {0.0, 0.0}, 0.35);
    IntegrabilityGauge gauge = build_gauge({f}, Exec::openmp);
    double vs = 0, vp = 0;
    displacement_functional(f, gauge, Exec::serial);  // warmup
    double ts = time_ms(
        [&] { vs = displacement_functional(f, gauge, Exec::serial); });
    double tp = time_ms(
        [&] { vp = displacement_functional(f, gauge, Exec::openmp); });
    report("displacement_functional", ts, tp);
    if (vs != vp) std::printf("  MISMATCH between serial and openmp!\n");
  }

  {
    // Lipschitz region scan on the hyperbolic plane
    ModelManifold m(ManifoldKind::Hyperbolic, 2);
    CounterRng rng(13, 3);
    Point base = canonical_base(m);
    SemiDiscretePotential pot = random_semidiscrete(m, base, 1.0, 3, rng);
    std::vector<Point> region(2000);
    for (auto& z : region) z = random_point_ball(m, base, 1.0, rng);
    double bs = 0, bp = 0;
    lipschitz_bound(pot, region, Exec::serial);  // warmup
    double ts = time_ms([&] { bs = lipschitz_bound(pot, region, Exec::serial); });
    double tp = time_ms([&] { bp = lipschitz_bound(pot, region, Exec::openmp); });
    report("lipschitz_region_scan", ts, tp);
    if (bs != bp) std::printf("  MISMATCH between serial and openmp!\n");
  }

  return 0;
}
