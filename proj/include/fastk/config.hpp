#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastk/bounds.hpp"
#include "fastk/cluster.hpp"
#include "fastk/engine.hpp"

namespace fastk {

// Bound-evaluation block for the bounds/schedule subcommands.
struct BoundsConfig {
  BoundParams params;
  int k_start = 1;
  double horizon = 0.0;
  int grid_points = 2000;
  ExpMeanScaling mean_scaling = ExpMeanScaling::by_rate;
};

// One experiment: a shared dataset, a set of modes to compare, and a list of
// replication seeds.
struct ExperimentConfig {
  Eigen::Index m = 0;
  Eigen::Index d = 0;
  std::uint64_t data_seed = 0;
  int n = 1;
  double eta = 0.0;
  long max_iterations = 1;
  double horizon = 0.0;
  ResponseTimeModel response_times;
  std::vector<Mode> modes;
  std::vector<std::string> mode_names;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = ".";
  std::optional<BoundsConfig> bounds;

  RunConfig run_config(std::size_t mode_index, std::uint64_t master_seed) const;
};

// Strict parser: unknown keys anywhere in the document are an error.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Write-then-rename so partial output never lands under the final name.
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace fastk
