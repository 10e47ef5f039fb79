// SPDX-License-Identifier: Apache-2.0
#include "wbary/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace wbary {

namespace {

using json = nlohmann::ordered_json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

ManifoldKind parse_kind(const std::string& s) {
  if (s == "euclidean") return ManifoldKind::Euclidean;
  if (s == "sphere") return ManifoldKind::Sphere;
  if (s == "hyperbolic") return ManifoldKind::Hyperbolic;
  throw SchemaError("unknown manifold kind: " + s);
}

}  // namespace

DiscreteMeasure read_measure_file(const std::string& path) {
  json j = load_json(path);
  try {
    auto mf = j.at("manifold");
    ModelManifold m(parse_kind(mf.at("kind").get<std::string>()),
                    mf.at("dim").get<int>());
    std::vector<Point> points;
    for (const auto& row : j.at("points")) {
      Vec x(row.size());
      for (std::size_t k = 0; k < row.size(); ++k) x[long(k)] = row[k];
      points.push_back(Point{std::move(x)});
    }
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    double total = 0;
    for (double w : weights) {
      if (w < 0) throw SchemaError("negative weight in " + path);
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw SchemaError("weights not normalized in " + path);
    for (double& w : weights) w /= total;
    return make_measure(m, std::move(points), std::move(weights));
  } catch (const json::exception& e) {
    throw SchemaError("measure schema violation in " + path + ": " + e.what());
  } catch (const ConstraintViolation& e) {
    throw SchemaError("invalid measure in " + path + ": " + e.what());
  }
}

void write_measure_file(const std::string& path, const DiscreteMeasure& mu) {
  json j;
  j["manifold"] = {{"kind", mu.manifold.name()}, {"dim", mu.manifold.dim()}};
  json pts = json::array();
  for (const auto& p : mu.points) {
    json row = json::array();
    for (long k = 0; k < p.coords.size(); ++k) row.push_back(p.coords[k]);
    pts.push_back(row);
  }
  j["points"] = pts;
  j["weights"] = mu.weights;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

GridDensity read_density_file(const std::string& path) {
  json j = load_json(path);
  try {
    auto box = j.at("box");
    return make_grid_density(box.at("lo").get<std::vector<double>>(),
                             box.at("hi").get<std::vector<double>>(),
                             j.at("resolution").get<std::vector<int>>(),
                             j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw SchemaError("density schema violation in " + path + ": " + e.what());
  } catch (const ConstraintViolation& e) {
    throw SchemaError("invalid density in " + path + ": " + e.what());
  }
}

void write_density_file(const std::string& path, const GridDensity& f) {
  json j;
  j["box"] = {{"lo", f.lo}, {"hi", f.hi}};
  j["resolution"] = f.resolution;
  j["values"] = f.values;
  std::ofstream out(path);
  out << j.dump() << "\n";
}

void ReportFile::add(const std::string& name, double value, double bound,
                     bool pass) {
  records.push_back(ReportRecord{name, value, bound, pass});
}

void ReportFile::add_upper(const std::string& name, double value,
                           double bound) {
  add(name, value, bound, value <= bound);
}

bool ReportFile::all_pass() const {
  for (const auto& r : records)
    if (!r.pass) return false;
  return true;
}

std::string ReportFile::to_json() const {
  json j;
  j["command"] = command;
  j["inputs_digest"] = inputs_digest;
  j["seed"] = seed;
  json recs = json::array();
  for (const auto& r : records)
    recs.push_back({{"name", r.name},
                    {"value", r.value},
                    {"bound", r.bound},
                    {"pass", r.pass}});
  j["records"] = recs;
  j["runtime_ms"] = runtime_ms;
  return j.dump(2) + "\n";
}

std::string ReportFile::to_csv() const {
  std::ostringstream out;
  out << "name,value,bound,pass\n";
  out.precision(17);
  for (const auto& r : records)
    out << r.name << "," << r.value << "," << r.bound << ","
        << (r.pass ? 1 : 0) << "\n";
  return out.str();
}

std::string digest_inputs(const std::vector<std::string>& file_paths,
                          const std::string& flags) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&](const char* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= std::uint8_t(data[i]);
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& path : file_paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    eat(bytes.data(), bytes.size());
  }
  eat(flags.data(), flags.size());
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace wbary
