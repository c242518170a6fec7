#include <Eigen/Eigenvalues>
#include <filesystem>

#include <stdexcept>

#include "doctest.h"
#include "fastk/dataset.hpp"
#include "fastk/model.hpp"
#include "fastk/rng.hpp"

using namespace fastk;

namespace {

Dataset zero_noise_dataset(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  Dataset ds = generate_synthetic(m, d, seed);
  ds.labels = ds.features * (*ds.true_weights);  // exact, no noise
  return ds;
}

Eigen::VectorXd random_weights(Eigen::Index d, Rng& rng) {
  Eigen::VectorXd w(d);
  for (Eigen::Index i = 0; i < d; ++i) w(i) = rng.gaussian() * 10.0;
  return w;
}

// Central finite differences of the loss, the independent gradient oracle.
Eigen::VectorXd fd_gradient(const Dataset& ds, const Eigen::VectorXd& w, double h) {
  Eigen::VectorXd g(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd wp = w, wm = w;
    wp(i) += h;
    wm(i) -= h;
    g(i) = (loss(ds, wp) - loss(ds, wm)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("loss is zero at an interpolating point") {
  Dataset ds = zero_noise_dataset(30, 4, 2);
  CHECK(loss(ds, *ds.true_weights) == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(full_gradient(ds, *ds.true_weights).norm() < 1e-9);
}

TEST_CASE("single-row hand arithmetic") {
  Dataset ds;
  ds.features.resize(1, 2);
  ds.features << 1, 0;
  ds.labels.resize(1);
  ds.labels << 3;
  Eigen::VectorXd w(2);
  w << 1, 0;
  CHECK(loss(ds, w) == doctest::Approx(2.0));
  Eigen::VectorXd g = full_gradient(ds, w);
  CHECK(g(0) == doctest::Approx(-2.0));
  CHECK(g(1) == doctest::Approx(0.0));
}

TEST_CASE("loss is minimized at the optimum") {
  Dataset ds = generate_synthetic(60, 5, 4);
  Optimum opt = solve_optimum(ds);
  Rng rng(77);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd v = random_weights(5, rng);
    CHECK(loss(ds, opt.weights_star + v) >= opt.loss_star);
  }
}

TEST_CASE("dimension mismatch rejected") {
  Dataset ds = generate_synthetic(10, 3, 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(loss(ds, w), std::invalid_argument);
  CHECK_THROWS_AS(full_gradient(ds, w), std::invalid_argument);
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Dataset ds = generate_synthetic(20 + trial, 4, 100 + trial);
    Eigen::VectorXd w = random_weights(4, rng);
    Eigen::VectorXd g = full_gradient(ds, w);
    Eigen::VectorXd fd = fd_gradient(ds, w, 1e-4);
    CHECK((g - fd).norm() / fd.norm() < 1e-5);
  }
}

TEST_CASE("partial gradient of the single shard equals the full gradient") {
  Dataset ds = generate_synthetic(12, 3, 8);
  auto shards = shard(ds, 1);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd pg = partial_gradient(ds, shards[0], w);
  Eigen::VectorXd fg = full_gradient(ds, w);
  CHECK((pg - fg).norm() / fg.norm() < 1e-12);
}

TEST_CASE("average of partial gradients reproduces the full gradient") {
  Dataset ds = generate_synthetic(60, 5, 8);
  auto shards = shard(ds, 6);
  Rng rng(9);
  Eigen::VectorXd w = random_weights(5, rng);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
  for (const auto& sh : shards) mean += partial_gradient(ds, sh, w);
  mean /= 6.0;
  Eigen::VectorXd fg = full_gradient(ds, w);
  CHECK((mean - fg).norm() / fg.norm() < 1e-12);
}

TEST_CASE("two-row shard matches a direct summation") {
  Dataset ds = generate_synthetic(10, 3, 13);
  Shard sh;
  sh.worker_id = 1;
  sh.row_indices = {2, 7};
  Eigen::VectorXd w(3);
  w << 1.5, -2.0, 0.5;
  // Direct two-term computation, written out independently.
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(3);
  for (Eigen::Index r : {Eigen::Index(2), Eigen::Index(7)}) {
    double residual = 0;
    for (Eigen::Index c = 0; c < 3; ++c) residual += ds.features(r, c) * w(c);
    residual -= ds.labels(r);
    for (Eigen::Index c = 0; c < 3; ++c) expected(c) += residual * ds.features(r, c);
  }
  expected /= 2.0;
  CHECK((partial_gradient(ds, sh, w) - expected).norm() < 1e-12 * expected.norm());
}

TEST_CASE("foreign shard rejected") {
  Dataset ds = generate_synthetic(10, 3, 13);
  Shard sh;
  sh.row_indices = {11};
  CHECK_THROWS_AS(partial_gradient(ds, sh, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("optimum recovers the generating weights on noiseless data") {
  Dataset ds = zero_noise_dataset(200, 10, 3);
  Optimum opt = solve_optimum(ds);
  CHECK((opt.weights_star - *ds.true_weights).norm() / ds.true_weights->norm() < 1e-6);
  CHECK(opt.loss_star < 1e-10);
}

TEST_CASE("square invertible system is interpolated") {
  Dataset ds = generate_synthetic(6, 6, 19);
  Optimum opt = solve_optimum(ds);
  CHECK(opt.loss_star < 1e-8);
}

TEST_CASE("gradient vanishes at the optimum") {
  Dataset ds = generate_synthetic(300, 12, 23);
  Optimum opt = solve_optimum(ds);
  const double gnorm = full_gradient(ds, opt.weights_star).norm();
  CHECK(gnorm <= 1e-8 * std::max(1.0, opt.weights_star.norm()));
}

TEST_CASE("rank-deficient system reported distinctly") {
  Dataset ds = generate_synthetic(20, 3, 31);
  ds.features.col(2) = ds.features.col(1);  // duplicate column
  CHECK_THROWS_AS(solve_optimum(ds), RankDeficientError);
}

TEST_CASE("full-gradient step below 2/L never increases the loss") {
  Dataset ds = generate_synthetic(80, 6, 37);
  Eigen::MatrixXd hessian =
      ds.features.transpose() * ds.features / static_cast<double>(ds.rows());
  const double lmax = hessian.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
  const double eta = 1.9 / lmax;
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd w = random_weights(6, rng);
    Eigen::VectorXd w2 = w - eta * full_gradient(ds, w);
    CHECK(loss(ds, w2) <= loss(ds, w) * (1 + 1e-12));
  }
}

TEST_CASE("optimum json round trip") {
  Dataset ds = generate_synthetic(40, 4, 43);
  Optimum opt = solve_optimum(ds);
  const auto path = std::filesystem::temp_directory_path() / "fastk_opt.json";
  write_optimum_json(opt, path.string());
  Optimum back = read_optimum_json(path.string());
  CHECK(back.loss_star == opt.loss_star);
  CHECK(back.weights_star == opt.weights_star);
  std::filesystem::remove(path);
}
