#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fastk {

// Synthetic regression dataset. Features are drawn from {1..10}, the
// generating weights from {1..100}, labels are <x, w_bar> plus unit-variance
// Gaussian noise. Immutable after creation.
struct Dataset {
  Eigen::MatrixXd features;  // m x d
  Eigen::VectorXd labels;    // m
  std::optional<Eigen::VectorXd> true_weights;  // d, present for synthetic data
  std::uint64_t seed = 0;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

// One worker's horizontal slice of the dataset. Row indices are 0-based,
// worker ids are 1-based.
struct Shard {
  std::vector<Eigen::Index> row_indices;
  int worker_id = 0;
};

Dataset generate_synthetic(Eigen::Index m, Eigen::Index d, std::uint64_t seed);

// Contiguous equal partition: rows [0, s) to worker 1, [s, 2s) to worker 2,
// etc. Throws if n does not divide m.
std::vector<Shard> shard(const Dataset& dataset, int n);

// CSV with header x1,...,xd,y. The sidecar JSON holds {seed, true_weights}.
void write_dataset_csv(const Dataset& dataset, const std::string& path);
Dataset read_dataset_csv(const std::string& path);
void write_dataset_sidecar(const Dataset& dataset, const std::string& path);
void read_dataset_sidecar(Dataset& dataset, const std::string& path);

}  // namespace fastk
