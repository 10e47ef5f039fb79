// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "wbary/geometry.hpp"
#include "wbary/parallel.hpp"

namespace wbary {

// Nonnegative density sampled on a regular grid over an axis-aligned box in a
// Euclidean chart. Values live at cell centers; integrals are Riemann sums.
struct GridDensity {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<int> resolution;  // cells per axis
  std::vector<double> values;   // row-major over the cell lattice

  int dim() const { return int(lo.size()); }
  std::size_t cells() const { return values.size(); }
  double cell_volume() const;
  std::vector<double> cell_center(std::size_t flat) const;
  double mass() const;  // Riemann sum
  bool same_grid(const GridDensity& other) const;
};

GridDensity make_grid_density(std::vector<double> lo, std::vector<double> hi,
                              std::vector<int> resolution,
                              std::vector<double> values,
                              bool require_probability = false);

// samples fn at cell centers
GridDensity discretize_on_grid(std::vector<double> lo, std::vector<double> hi,
                               std::vector<int> resolution,
                               const std::function<double(
                                   const std::vector<double>&)>& fn,
                               bool normalize = false);

// Riemann sum of g(f) over the box; per-cell values are computed in parallel
// into a buffer and reduced serially, so both execution modes agree bitwise.
double grid_functional(const GridDensity& f,
                       const std::function<double(double)>& g,
                       Exec mode = Exec::openmp);

// Histogram of a weighted point cloud over a fixed box; bin masses.
struct DensityHistogram {
  GridDensity density;   // bin mass / bin volume
  double max_density = 0;
};

DensityHistogram histogram_density(const std::vector<Point>& pts,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& lo,
                                   const std::vector<double>& hi,
                                   const std::vector<int>& resolution);

}  // namespace wbary
