#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "fastk/dataset.hpp"

namespace fastk {

struct Optimum {
  Eigen::VectorXd weights_star;
  double loss_star = 0.0;
};

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Objective interface so other convex losses can slot in; only l2 linear
// regression ships.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double loss(const Dataset& ds, const Eigen::VectorXd& w) const = 0;
  virtual Eigen::VectorXd full_gradient(const Dataset& ds,
                                        const Eigen::VectorXd& w) const = 0;
  virtual Eigen::VectorXd partial_gradient(const Dataset& ds, const Shard& shard,
                                           const Eigen::VectorXd& w) const = 0;
  virtual Optimum solve_optimum(const Dataset& ds) const = 0;
};

// F(w) = ||Xw - y||^2 / (2m); gradient is X^T(Xw - y)/m.
class LeastSquares final : public Objective {
 public:
  double loss(const Dataset& ds, const Eigen::VectorXd& w) const override;
  Eigen::VectorXd full_gradient(const Dataset& ds,
                                const Eigen::VectorXd& w) const override;
  Eigen::VectorXd partial_gradient(const Dataset& ds, const Shard& shard,
                                   const Eigen::VectorXd& w) const override;
  Optimum solve_optimum(const Dataset& ds) const override;
};

// Convenience wrappers over a shared LeastSquares instance.
double loss(const Dataset& ds, const Eigen::VectorXd& w);
Eigen::VectorXd full_gradient(const Dataset& ds, const Eigen::VectorXd& w);
Eigen::VectorXd partial_gradient(const Dataset& ds, const Shard& shard,
                                 const Eigen::VectorXd& w);
Optimum solve_optimum(const Dataset& ds);

void write_optimum_json(const Optimum& opt, const std::string& path);
Optimum read_optimum_json(const std::string& path);

}  // namespace fastk
