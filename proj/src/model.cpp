#include "fastk/model.hpp"

#include <Eigen/QR>
#include <fstream>

#include "json.hpp"

namespace fastk {

namespace {

void check_dim(const Dataset& ds, const Eigen::VectorXd& w) {
  if (w.size() != ds.dim()) {
    throw std::invalid_argument("weight vector length does not match feature dimension");
  }
}

void check_shard(const Dataset& ds, const Shard& shard) {
  if (shard.row_indices.empty()) {
    throw std::invalid_argument("empty shard");
  }
  for (Eigen::Index r : shard.row_indices) {
    if (r < 0 || r >= ds.rows()) {
      throw std::invalid_argument("shard references rows outside the dataset");
    }
  }
}

}  // namespace

double LeastSquares::loss(const Dataset& ds, const Eigen::VectorXd& w) const {
  check_dim(ds, w);
  return (ds.features * w - ds.labels).squaredNorm() /
         (2.0 * static_cast<double>(ds.rows()));
}

Eigen::VectorXd LeastSquares::full_gradient(const Dataset& ds,
                                            const Eigen::VectorXd& w) const {
  check_dim(ds, w);
  Eigen::VectorXd residual = ds.features * w - ds.labels;
  return ds.features.transpose() * residual / static_cast<double>(ds.rows());
}

Eigen::VectorXd LeastSquares::partial_gradient(const Dataset& ds, const Shard& shard,
                                               const Eigen::VectorXd& w) const {
  check_dim(ds, w);
  check_shard(ds, shard);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(ds.dim());
  for (Eigen::Index r : shard.row_indices) {
    const double residual = ds.features.row(r).dot(w) - ds.labels(r);
    g.noalias() += residual * ds.features.row(r).transpose();
  }
  return g / static_cast<double>(shard.row_indices.size());
}

Optimum LeastSquares::solve_optimum(const Dataset& ds) const {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ds.features);
  if (qr.rank() < ds.dim()) {
    throw RankDeficientError("least-squares system is rank deficient");
  }
  Optimum opt;
  opt.weights_star = qr.solve(ds.labels);
  opt.loss_star = loss(ds, opt.weights_star);
  return opt;
}

namespace {
const LeastSquares kLeastSquares;
}

double loss(const Dataset& ds, const Eigen::VectorXd& w) {
  return kLeastSquares.loss(ds, w);
}

Eigen::VectorXd full_gradient(const Dataset& ds, const Eigen::VectorXd& w) {
  return kLeastSquares.full_gradient(ds, w);
}

Eigen::VectorXd partial_gradient(const Dataset& ds, const Shard& shard,
                                 const Eigen::VectorXd& w) {
  return kLeastSquares.partial_gradient(ds, shard, w);
}

Optimum solve_optimum(const Dataset& ds) { return kLeastSquares.solve_optimum(ds); }

void write_optimum_json(const Optimum& opt, const std::string& path) {
  nlohmann::json j;
  j["weights_star"] = std::vector<double>(
      opt.weights_star.data(), opt.weights_star.data() + opt.weights_star.size());
  j["loss_star"] = opt.loss_star;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

Optimum read_optimum_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  Optimum opt;
  auto v = j.at("weights_star").get<std::vector<double>>();
  opt.weights_star = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
  opt.loss_star = j.at("loss_star").get<double>();
  return opt;
}

}  // namespace fastk
