// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wbary/grid.hpp"
#include "wbary/measures.hpp"

namespace wbary {

struct SchemaError : Error {
  using Error::Error;
};

// MeasureFile schema:
//   {"manifold": {"kind": "euclidean"|"sphere"|"hyperbolic", "dim": int},
//    "points": [[...], ...], "weights": [...]}
// Weights must be normalized within 1e-9 (then exactly renormalized).
DiscreteMeasure read_measure_file(const std::string& path);
void write_measure_file(const std::string& path, const DiscreteMeasure& mu);

// DensityFile schema:
//   {"box": {"lo": [...], "hi": [...]}, "resolution": [...], "values": [...]}
GridDensity read_density_file(const std::string& path);
void write_density_file(const std::string& path, const GridDensity& f);

struct ReportRecord {
  std::string name;
  double value = 0;
  double bound = 0;
  bool pass = false;
};

struct ReportFile {
  std::string command;
  std::string inputs_digest;
  std::uint64_t seed = 0;
  std::vector<ReportRecord> records;
  double runtime_ms = 0;

  void add(const std::string& name, double value, double bound, bool pass);
  // convenience: value must be <= bound
  void add_upper(const std::string& name, double value, double bound);
  bool all_pass() const;
  std::string to_json() const;   // deterministic apart from runtime_ms
  std::string to_csv() const;
};

// FNV-1a over file bytes and flag strings, for the report inputs digest
std::string digest_inputs(const std::vector<std::string>& file_paths,
                          const std::string& flags);

}  // namespace wbary
