#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hpb/sweep.hpp"

namespace hpb {

// Effective run configuration: defaults, then the YAML file, then CLI flags.
//
// File layout (every key optional):
//
//   g1: 10          # flat SystemParams keys, units of kappa
//   g2: 10
//   delta: 0
//   Delta: 0
//   eta: 0.1
//   gamma: 1
//   n_cav: 5
//   threads: 4
//   format: csv
//   radiance: false
//   x_axis: {param: Delta, min: -2.5, max: 2.5, points: 101}
//   y_axis: {param: delta, min: -5, max: 5, points: 101}
//   hpb_track: {branch: primary, K: [1, 1.5, 2, 2.5, 3]}
//   spectrum: {min: -5, max: 5, points: 201}
struct RunConfig {
  SystemParams params;
  int n_cav = 5;
  int threads = 0;
  std::string format = "csv";
  bool radiance = false;
  // Axis extents below are read off the published maps, not stated values.
  Axis x_axis{AxisParam::Delta, -2.5, 2.5, 101};
  Axis y_axis{AxisParam::delta, -5.0, 5.0, 101};
  HpbBranch branch = HpbBranch::Primary;
  std::vector<double> K_values{1.0, 1.5, 2.0, 2.5, 3.0};
  Axis spectrum_axis{AxisParam::delta, -5.0, 5.0, 201};
};

// Throws ErrorKind::Config on unreadable files, unknown keys or bad values.
RunConfig load_config_file(const std::string& path);
void merge_yaml(RunConfig& config, const std::string& yaml_text);

HpbBranch parse_branch(const std::string& name);

nlohmann::json to_json(const RunConfig& config);

}  // namespace hpb
