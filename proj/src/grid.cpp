// SPDX-License-Identifier: Apache-2.0
#include "wbary/grid.hpp"

#include <cmath>

namespace wbary {

double GridDensity::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= (hi[a] - lo[a]) / resolution[a];
  return v;
}

std::vector<double> GridDensity::cell_center(std::size_t flat) const {
  std::vector<double> x(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    int idx = int(flat % resolution[a]);
    flat /= resolution[a];
    double h = (hi[a] - lo[a]) / resolution[a];
    x[a] = lo[a] + (idx + 0.5) * h;
  }
  return x;
}

double GridDensity::mass() const {
  double s = 0;
  for (double v : values) s += v;
  return s * cell_volume();
}

bool GridDensity::same_grid(const GridDensity& other) const {
  return lo == other.lo && hi == other.hi && resolution == other.resolution;
}

GridDensity make_grid_density(std::vector<double> lo, std::vector<double> hi,
                              std::vector<int> resolution,
                              std::vector<double> values,
                              bool require_probability) {
  if (lo.empty() || lo.size() != hi.size() || lo.size() != resolution.size())
    throw ConstraintViolation("grid density: inconsistent box spec");
  std::size_t n = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (hi[a] <= lo[a] || resolution[a] < 1)
      throw ConstraintViolation("grid density: degenerate axis");
    n *= std::size_t(resolution[a]);
  }
  if (values.size() != n)
    throw ConstraintViolation("grid density: value count mismatch");
  for (double v : values)
    if (v < 0) throw ConstraintViolation("grid density: negative value");
  GridDensity g{std::move(lo), std::move(hi), std::move(resolution),
                std::move(values)};
  if (require_probability && std::abs(g.mass() - 1.0) > 1e-6)
    throw ConstraintViolation("grid density: mass is not 1");
  return g;
}

GridDensity discretize_on_grid(std::vector<double> lo, std::vector<double> hi,
                               std::vector<int> resolution,
                               const std::function<double(
                                   const std::vector<double>&)>& fn,
                               bool normalize) {
  std::size_t n = 1;
  for (int r : resolution) n *= std::size_t(r);
  GridDensity g{lo, hi, resolution, std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double v = fn(g.cell_center(i));
    g.values[i] = v > 0 ? v : 0.0;
  }
  if (normalize) {
    double mass = g.mass();
    if (mass <= 0) throw ConstraintViolation("discretize: zero mass");
    for (auto& v : g.values) v /= mass;
  }
  return make_grid_density(std::move(g.lo), std::move(g.hi),
                           std::move(g.resolution), std::move(g.values));
}

double grid_functional(const GridDensity& f,
                       const std::function<double(double)>& g, Exec mode) {
  std::vector<double> buf(f.cells());
  for_each_index(f.cells(), mode,
                 [&](std::size_t i) { buf[i] = g(f.values[i]); });
  double s = 0;
  for (double v : buf) s += v;
  return s * f.cell_volume();
}

DensityHistogram histogram_density(const std::vector<Point>& pts,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& lo,
                                   const std::vector<double>& hi,
                                   const std::vector<int>& resolution) {
  const int dim = int(lo.size());
  std::size_t n = 1;
  for (int r : resolution) n *= std::size_t(r);
  std::vector<double> masses(n, 0.0);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::size_t flat = 0;
    bool inside = true;
    for (int a = 0; a < dim; ++a) {
      double h = (hi[a] - lo[a]) / resolution[a];
      int idx = int(std::floor((pts[p].coords[a] - lo[a]) / h));
      if (idx == resolution[a]) idx--;  // right boundary belongs to last bin
      if (idx < 0 || idx >= resolution[a]) {
        inside = false;
        break;
      }
      flat = flat * resolution[a] + idx;
    }
    if (inside) masses[flat] += weights[p];
  }
  GridDensity g{lo, hi, resolution, std::move(masses)};
  double vol = g.cell_volume();
  double peak = 0;
  for (auto& v : g.values) {
    v /= vol;
    peak = std::max(peak, v);
  }
  return DensityHistogram{std::move(g), peak};
}

}  // namespace wbary
