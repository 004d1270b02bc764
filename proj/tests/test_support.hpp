#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "cismodel/design_io.hpp"
#include "cismodel/hardware.hpp"
#include "json.hpp"

namespace test {

inline std::string design_path(const std::string& rel) {
  return std::string(CISMODEL_DESIGN_DIR) + "/" + rel;
}

inline cis::Design load(const std::string& rel) { return cis::load_design_file(design_path(rel)); }

// Design documents are JSON with comments; tests edit them as trees.
inline nlohmann::json read_json(const std::string& rel) {
  std::ifstream in(design_path(rel));
  return nlohmann::json::parse(in, nullptr, true, true);
}

inline cis::Design from_json(const nlohmann::json& j) { return cis::load_design(j.dump()); }

inline cis::Stage stage(std::string name, cis::StageKind kind, cis::Dims3 in, cis::Dims3 out,
                        cis::Dims2 kernel = {1, 1}, cis::Dims2 stride = {1, 1},
                        cis::Count ops = 1, std::vector<std::string> preds = {}) {
  cis::Stage s;
  s.name = std::move(name);
  s.kind = kind;
  s.shape = {in, out, kernel, stride};
  s.ops_per_window = ops;
  s.predecessors = std::move(preds);
  return s;
}

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

inline bool within_ulps(double a, double b, int ulps) {
  double x = a;
  for (int i = 0; i < ulps && x != b; ++i) x = std::nextafter(x, b);
  return x == b;
}

}  // namespace test
