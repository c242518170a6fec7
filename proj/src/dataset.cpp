#include "fastk/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fastk/rng.hpp"
#include "json.hpp"

namespace fastk {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset generate_synthetic(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  if (m < 1 || d < 1) {
    throw std::invalid_argument("generate_synthetic: m and d must be >= 1");
  }
  Rng rng(seed);
  Dataset ds;
  ds.seed = seed;
  ds.features.resize(m, d);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      ds.features(r, c) = static_cast<double>(rng.uniform_int(1, 10));
    }
  }
  Eigen::VectorXd wbar(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    wbar(c) = static_cast<double>(rng.uniform_int(1, 100));
  }
  ds.true_weights = wbar;
  ds.labels.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    ds.labels(r) = ds.features.row(r).dot(wbar) + rng.gaussian();
  }
  return ds;
}

std::vector<Shard> shard(const Dataset& dataset, int n) {
  const Eigen::Index m = dataset.rows();
  if (n < 1 || m % n != 0) {
    throw std::invalid_argument("shard: number of workers must divide the row count");
  }
  const Eigen::Index s = m / n;
  std::vector<Shard> shards(n);
  for (int i = 0; i < n; ++i) {
    shards[i].worker_id = i + 1;
    shards[i].row_indices.reserve(s);
    for (Eigen::Index r = i * s; r < (i + 1) * s; ++r) {
      shards[i].row_indices.push_back(r);
    }
  }
  return shards;
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
    out << 'x' << (c + 1) << ',';
  }
  out << "y\n";
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    for (Eigen::Index c = 0; c < dataset.dim(); ++c) {
      out << format_double(dataset.features(r, c)) << ',';
    }
    out << format_double(dataset.labels(r)) << '\n';
  }
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  Eigen::Index d = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
  std::vector<double> values;
  Eigen::Index m = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index cols = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != d + 1) throw std::runtime_error(path + ": inconsistent column count");
    ++m;
  }
  Dataset ds;
  ds.features.resize(m, d);
  ds.labels.resize(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) ds.features(r, c) = values[r * (d + 1) + c];
    ds.labels(r) = values[r * (d + 1) + d];
  }
  return ds;
}

void write_dataset_sidecar(const Dataset& dataset, const std::string& path) {
  nlohmann::json j;
  j["seed"] = dataset.seed;
  if (dataset.true_weights) {
    j["true_weights"] = std::vector<double>(
        dataset.true_weights->data(),
        dataset.true_weights->data() + dataset.true_weights->size());
  } else {
    j["true_weights"] = nullptr;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

void read_dataset_sidecar(Dataset& dataset, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  dataset.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("true_weights").is_null()) {
    auto v = j.at("true_weights").get<std::vector<double>>();
    dataset.true_weights = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
  }
}

}  // namespace fastk
