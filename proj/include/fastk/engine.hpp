#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fastk/bounds.hpp"
#include "fastk/cluster.hpp"
#include "fastk/dataset.hpp"
#include "fastk/model.hpp"

namespace fastk {

struct ModelState {
  Eigen::VectorXd weights;
  long iteration = 0;
  double wall_clock = 0.0;
};

// Stationarity-detection state: a running count of sign flips between
// consecutive gradient estimates.
struct PflugState {
  long count_negative = 0;
  long count_iter = 1;
  std::optional<Eigen::VectorXd> prev_gradient;
  long thresh = 0;
  long burnin = 0;
  long step = 0;
};

struct PflugResult {
  int new_k = 0;
  bool switched = false;
};

struct TraceRecord {
  long iteration = 0;
  double wall_clock = 0.0;
  int k = 0;
  double error = 0.0;  // F(w_j) - F*
  long count_negative = 0;
  bool switched = false;
};

struct ModeFixed {
  int k = 1;
};
struct ModeScheduled {
  SwitchSchedule schedule;
};
struct ModeAdaptive {
  int k_start = 1;
  int step = 1;
  long thresh = 0;
  long burnin = 0;
  int k_cap = 0;  // 0 means: largest k_start + i*step <= n
};
struct ModeAsync {};

using Mode = std::variant<ModeFixed, ModeScheduled, ModeAdaptive, ModeAsync>;

struct RunConfig {
  Eigen::Index m = 0;
  Eigen::Index d = 0;
  std::uint64_t data_seed = 0;
  int n = 1;
  double eta = 0.0;
  long max_iterations = 1;
  double horizon = 0.0;  // wall-clock stop for async mode
  ResponseTimeModel response_times;
  Mode mode = ModeFixed{1};
  std::uint64_t master_seed = 0;
};

struct StepResult {
  Eigen::VectorXd gradient_estimate;
  double elapsed = 0.0;
  std::vector<int> winners;  // worker ids, 1-based
};

// One synchronous fastest-k iteration: sample response times, take the k
// fastest (ties broken by lowest worker index), average their partial
// gradients and apply the update. Advances wall_clock by the k-th order
// statistic and increments the iteration count.
StepResult step_fastest_k(ModelState& state, int k, const std::vector<Shard>& shards,
                          const Dataset& dataset, const Objective& objective,
                          const ResponseTimeModel& model, double eta, Rng& rng);

// Counter update for one iteration: compares this iteration's gradient
// estimate against the stored previous one, possibly raising k. Counters
// reset on a switch; the stored gradient carries across switches.
PflugResult pflug_update(PflugState& state, const Eigen::VectorXd& current_gradient,
                         int k, int k_cap);

int default_k_cap(int k_start, int step, int n);

// Full run against a caller-supplied dataset/optimum (shared across modes in
// an experiment). run(config) is the self-contained variant.
std::vector<TraceRecord> run_with(const Dataset& dataset, const Optimum& optimum,
                                  const RunConfig& config,
                                  const Objective& objective = LeastSquares{});
std::vector<TraceRecord> run(const RunConfig& config);

// Asynchronous baseline: one outstanding computation per worker, each update
// applies a single (possibly stale) partial gradient.
std::vector<TraceRecord> run_async(const Dataset& dataset, const Optimum& optimum,
                                   const RunConfig& config,
                                   const Objective& objective = LeastSquares{});

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

}  // namespace fastk
