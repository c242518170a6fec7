#include <cmath>
#include <filesystem>

#include <stdexcept>

#include "doctest.h"
#include "fastk/engine.hpp"

using namespace fastk;

namespace {

Dataset zero_noise_dataset(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  Dataset ds = generate_synthetic(m, d, seed);
  ds.labels = ds.features * (*ds.true_weights);
  return ds;
}

}  // namespace

TEST_CASE("zero step size leaves weights fixed but time advances") {
  Dataset ds = generate_synthetic(12, 3, 1);
  auto shards = shard(ds, 4);
  LeastSquares obj;
  ModelState state;
  state.weights = Eigen::VectorXd::Ones(3);
  Rng rng(5);
  StepResult r = step_fastest_k(state, 2, shards, ds, obj,
                                ResponseTimeModel::exponential(1.0), 0.0, rng);
  CHECK(state.weights == Eigen::VectorXd::Ones(3));
  CHECK(state.wall_clock > 0);
  CHECK(state.iteration == 1);
  CHECK(r.winners.size() == 2);
}

TEST_CASE("k = n averages every partial gradient") {
  Dataset ds = generate_synthetic(20, 4, 2);
  auto shards = shard(ds, 5);
  LeastSquares obj;
  ModelState state;
  state.weights = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd fg = obj.full_gradient(ds, state.weights);
  Rng rng(6);
  StepResult r = step_fastest_k(state, 5, shards, ds, obj,
                                ResponseTimeModel::exponential(1.0), 0.01, rng);
  CHECK((r.gradient_estimate - fg).norm() / fg.norm() < 1e-12);
}

TEST_CASE("ties resolve to the lowest worker index") {
  Dataset ds = generate_synthetic(9, 2, 3);
  auto shards = shard(ds, 3);
  LeastSquares obj;
  ModelState state;
  state.weights = Eigen::VectorXd::Zero(2);
  Rng rng(7);
  StepResult r = step_fastest_k(state, 2, shards, ds, obj,
                                ResponseTimeModel::deterministic(1.0), 0.01, rng);
  CHECK(r.winners == std::vector<int>{1, 2});
  CHECK(r.elapsed == 1.0);
  CHECK(state.wall_clock == 1.0);
}

TEST_CASE("k out of range rejected") {
  Dataset ds = generate_synthetic(9, 2, 3);
  auto shards = shard(ds, 3);
  LeastSquares obj;
  ModelState state;
  state.weights = Eigen::VectorXd::Zero(2);
  Rng rng(7);
  CHECK_THROWS_AS(step_fastest_k(state, 4, shards, ds, obj,
                                 ResponseTimeModel::deterministic(1.0), 0.01, rng),
                  std::invalid_argument);
}

TEST_CASE("pflug counter arithmetic") {
  Eigen::VectorXd gx(2), gnx(2), gy(2);
  gx << 1, 0;
  gnx << -1, 0;
  gy << 0, 1;

  PflugState st;
  st.thresh = 10;
  st.burnin = 200;
  st.step = 10;
  st.prev_gradient = gnx;
  // Opposite directions: inner product -1 < 0, counter up.
  PflugResult r = pflug_update(st, gx, 10, 40);
  CHECK(st.count_negative == 1);
  CHECK(!r.switched);
  // Orthogonal: inner product 0 takes the else-branch, counter down.
  st.prev_gradient = gy;
  pflug_update(st, gx, 10, 40);
  CHECK(st.count_negative == 0);
}

TEST_CASE("pflug threshold crossing switches and resets") {
  Eigen::VectorXd gx(2), gnx(2);
  gx << 1, 0;
  gnx << -1, 0;
  PflugState st;
  st.thresh = 10;
  st.burnin = 5;
  st.step = 10;
  st.count_negative = 10;  // at the threshold
  st.count_iter = 6;       // burn-in satisfied
  st.prev_gradient = gnx;
  PflugResult r = pflug_update(st, gx, 10, 40);
  CHECK(r.switched);
  CHECK(r.new_k == 20);
  CHECK(st.count_negative == 0);
  CHECK(st.count_iter == 1);  // reset to 0, then the per-iteration increment
}

TEST_CASE("pflug holds without burn-in or at the cap") {
  Eigen::VectorXd gx(2), gnx(2);
  gx << 1, 0;
  gnx << -1, 0;

  PflugState st;
  st.thresh = 10;
  st.burnin = 100;
  st.step = 10;
  st.count_negative = 10;
  st.count_iter = 50;  // burn-in not yet satisfied
  st.prev_gradient = gnx;
  PflugResult r = pflug_update(st, gx, 10, 40);
  CHECK(!r.switched);
  CHECK(st.count_negative == 11);

  PflugState cap;
  cap.thresh = 10;
  cap.burnin = 5;
  cap.step = 10;
  cap.count_negative = 10;
  cap.count_iter = 100;
  cap.prev_gradient = gnx;
  r = pflug_update(cap, gx, 35, 40);  // 35 > 40 - 10, cannot raise k
  CHECK(!r.switched);
  CHECK(r.new_k == 35);
}

TEST_CASE("first iteration performs no counter update") {
  Eigen::VectorXd g(2);
  g << 1, 1;
  PflugState st;
  st.thresh = 1;
  st.burnin = 0;
  st.step = 1;
  PflugResult r = pflug_update(st, g, 1, 5);
  CHECK(!r.switched);
  CHECK(st.count_negative == 0);
  CHECK(st.count_iter == 2);
  CHECK(st.prev_gradient.has_value());
}

TEST_CASE("default k cap is the largest reachable staircase value") {
  CHECK(default_k_cap(10, 10, 50) == 50);
  CHECK(default_k_cap(10, 10, 45) == 40);
  CHECK(default_k_cap(1, 5, 50) == 46);
  CHECK(default_k_cap(1, 5, 36) == 36);
}

TEST_CASE("full-gradient descent on a consistent system reaches tiny error") {
  Dataset ds = zero_noise_dataset(40, 3, 9);
  Optimum opt = solve_optimum(ds);
  RunConfig rc;
  rc.n = 4;
  rc.eta = 1.0 / (ds.features.transpose() * ds.features / 40.0).norm();
  rc.max_iterations = 4000;
  rc.response_times = ResponseTimeModel::exponential(1.0);
  rc.mode = ModeFixed{4};
  rc.master_seed = 1;
  auto trace = run_with(ds, opt, rc);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    // Strict decrease until the error hits the numerical floor.
    CHECK((trace[i].error < trace[i - 1].error || trace[i - 1].error < 1e-20));
    CHECK(trace[i].wall_clock > trace[i - 1].wall_clock);
  }
  CHECK(trace.back().error < 1e-6);
}

TEST_CASE("first record wall clock equals the replayed order statistic") {
  Dataset ds = generate_synthetic(20, 3, 10);
  Optimum opt = solve_optimum(ds);
  RunConfig rc;
  rc.n = 5;
  rc.eta = 1e-4;
  rc.max_iterations = 1;
  rc.response_times = ResponseTimeModel::exponential(1.0);
  rc.mode = ModeFixed{3};
  rc.master_seed = 99;
  auto trace = run_with(ds, opt, rc);
  REQUIRE(trace.size() == 1);
  // Replay the run's generator stream independently.
  Rng replay = Rng::derive(99, 0);
  auto times = sample_response_times(ResponseTimeModel::exponential(1.0), 5, replay);
  CHECK(trace[0].wall_clock == kth_order_statistic(times, 3));
}

TEST_CASE("adaptive trace keeps k non-decreasing and resets the counter on switch") {
  Dataset ds = generate_synthetic(60, 4, 11);
  Optimum opt = solve_optimum(ds);
  RunConfig rc;
  rc.n = 6;
  rc.eta = 5e-3;
  rc.max_iterations = 3000;
  rc.response_times = ResponseTimeModel::exponential(1.0);
  rc.mode = ModeAdaptive{1, 1, 2, 10, 6};
  rc.master_seed = 3;
  auto trace = run_with(ds, opt, rc);
  bool saw_switch = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i > 0) CHECK(trace[i].k >= trace[i - 1].k);
    CHECK(trace[i].k <= 6);
    if (trace[i].switched) {
      saw_switch = true;
      CHECK(trace[i].count_negative == 0);
    }
  }
  CHECK(saw_switch);
}

TEST_CASE("scheduled mode follows the switch times") {
  Dataset ds = generate_synthetic(20, 3, 12);
  Optimum opt = solve_optimum(ds);
  SwitchSchedule sched;
  sched.k_start = 1;
  sched.entries = {{3.0, 2}, {6.0, 4}};
  sched.k_max = 4;
  RunConfig rc;
  rc.n = 4;
  rc.eta = 1e-4;
  rc.max_iterations = 20;
  rc.response_times = ResponseTimeModel::deterministic(1.0);
  rc.mode = ModeScheduled{sched};
  rc.master_seed = 4;
  auto trace = run_with(ds, opt, rc);
  // Deterministic unit times: iterations complete at t = 1, 2, 3, ...
  for (const auto& r : trace) {
    const double t_before = r.wall_clock - 1.0;
    int expected = t_before >= 6.0 ? 4 : (t_before >= 3.0 ? 2 : 1);
    CHECK(r.k == expected);
  }
}

TEST_CASE("runs are bit-deterministic") {
  RunConfig rc;
  rc.m = 40;
  rc.d = 3;
  rc.data_seed = 17;
  rc.n = 4;
  rc.eta = 1e-4;
  rc.max_iterations = 50;
  rc.response_times = ResponseTimeModel::exponential(1.0);
  rc.mode = ModeAdaptive{1, 1, 3, 5, 4};
  rc.master_seed = 21;
  auto a = run(rc);
  auto b = run(rc);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].wall_clock == b[i].wall_clock);
    CHECK(a[i].error == b[i].error);
    CHECK(a[i].k == b[i].k);
  }
}

TEST_CASE("async with one worker equals synchronous fastest-1") {
  Dataset ds = generate_synthetic(15, 3, 14);
  Optimum opt = solve_optimum(ds);
  RunConfig sync;
  sync.n = 1;
  sync.eta = 1e-4;
  sync.max_iterations = 40;
  sync.response_times = ResponseTimeModel::exponential(1.0);
  sync.mode = ModeFixed{1};
  sync.master_seed = 8;
  auto strace = run_with(ds, opt, sync);

  RunConfig async = sync;
  async.mode = ModeAsync{};
  async.horizon = 1e12;  // stop on max_iterations
  auto atrace = run_async(ds, opt, async);

  REQUIRE(strace.size() == atrace.size());
  for (std::size_t i = 0; i < strace.size(); ++i) {
    CHECK(strace[i].wall_clock == atrace[i].wall_clock);
    CHECK(strace[i].error == atrace[i].error);
  }
}

TEST_CASE("async two-worker alternation with deterministic times") {
  Dataset ds = generate_synthetic(8, 2, 15);
  Optimum opt = solve_optimum(ds);
  auto shards = shard(ds, 2);
  const double eta = 1e-4;

  RunConfig rc;
  rc.n = 2;
  rc.eta = eta;
  rc.max_iterations = 6;
  rc.horizon = 100.0;
  rc.response_times = ResponseTimeModel::deterministic(1.0);
  rc.mode = ModeAsync{};
  rc.master_seed = 2;
  auto trace = run_async(ds, opt, rc);
  REQUIRE(trace.size() == 6);
  // Both workers finish at integer times; the lower index goes first, so
  // updates land at t = 1, 1, 2, 2, 3, 3.
  const double expected_t[6] = {1, 1, 2, 2, 3, 3};
  for (int i = 0; i < 6; ++i) CHECK(trace[i].wall_clock == expected_t[i]);

  // Hand-rolled staleness-one replay: each worker computes on the weights
  // from the dispatch one update earlier.
  LeastSquares obj;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd disp[2] = {w, w};
  std::vector<double> errors;
  for (int upd = 0; upd < 6; ++upd) {
    const int worker = upd % 2;
    w = w - eta * obj.partial_gradient(ds, shards[worker], disp[worker]);
    disp[worker] = w;
    errors.push_back(obj.loss(ds, w) - opt.loss_star);
  }
  for (int i = 0; i < 6; ++i) CHECK(trace[i].error == doctest::Approx(errors[i]).epsilon(1e-14));
}

TEST_CASE("trace csv round trip") {
  std::vector<TraceRecord> trace = {{1, 0.5, 2, 1.25, -3, false}, {2, 1.75, 3, 0.5, 0, true}};
  const auto path = std::filesystem::temp_directory_path() / "fastk_trace.csv";
  write_trace_csv(trace, path.string());
  auto back = read_trace_csv(path.string());
  REQUIRE(back.size() == 2);
  CHECK(back[0].wall_clock == 0.5);
  CHECK(back[1].switched);
  CHECK(back[0].count_negative == -3);
  std::filesystem::remove(path);
}
