#include "fastk/engine.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fastk {

namespace {

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

StepResult step_fastest_k(ModelState& state, int k, const std::vector<Shard>& shards,
                          const Dataset& dataset, const Objective& objective,
                          const ResponseTimeModel& model, double eta, Rng& rng) {
  const int n = static_cast<int>(shards.size());
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");

  std::vector<double> times = sample_response_times(model, n, rng);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // (time, index) ordering: equal times resolve to the lowest worker index.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return times[a] != times[b] ? times[a] < times[b] : a < b;
  });

  StepResult result;
  result.winners.reserve(k);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dataset.dim());
  for (int i = 0; i < k; ++i) {
    const int w = order[i];
    result.winners.push_back(shards[w].worker_id);
    g += objective.partial_gradient(dataset, shards[w], state.weights);
  }
  g /= static_cast<double>(k);
  result.elapsed = times[order[k - 1]];
  result.gradient_estimate = std::move(g);

  state.weights -= eta * result.gradient_estimate;
  state.wall_clock += result.elapsed;
  state.iteration += 1;
  return result;
}

PflugResult pflug_update(PflugState& state, const Eigen::VectorXd& current_gradient,
                         int k, int k_cap) {
  PflugResult result{k, false};
  if (state.prev_gradient) {
    if (current_gradient.dot(*state.prev_gradient) < 0) {
      state.count_negative += 1;
    } else {
      state.count_negative -= 1;
    }
    if (state.count_negative > state.thresh && state.count_iter > state.burnin &&
        k <= k_cap - state.step) {
      result.new_k = k + static_cast<int>(state.step);
      result.switched = true;
      state.count_negative = 0;
      state.count_iter = 0;
    }
  }
  state.count_iter += 1;
  state.prev_gradient = current_gradient;
  return result;
}

int default_k_cap(int k_start, int step, int n) {
  if (step < 1) return k_start;
  int k = k_start;
  while (k + step <= n) k += step;
  return k;
}

namespace {

void validate_common(const RunConfig& config) {
  if (config.n < 1) throw std::invalid_argument("need at least one worker");
  if (!(config.eta >= 0)) throw std::invalid_argument("eta must be non-negative");
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::vector<TraceRecord> run_synchronous(const Dataset& dataset, const Optimum& optimum,
                                         const RunConfig& config,
                                         const Objective& objective) {
  const std::vector<Shard> shards = shard(dataset, config.n);
  Rng rng = Rng::derive(config.master_seed, 0);

  ModelState state;
  state.weights = Eigen::VectorXd::Zero(dataset.dim());

  int k = 1;
  const ModeScheduled* scheduled = std::get_if<ModeScheduled>(&config.mode);
  const ModeAdaptive* adaptive = std::get_if<ModeAdaptive>(&config.mode);
  int k_cap = config.n;
  PflugState pflug;
  if (const ModeFixed* fixed = std::get_if<ModeFixed>(&config.mode)) {
    k = fixed->k;
  } else if (scheduled) {
    k = scheduled->schedule.k_start;
  } else if (adaptive) {
    k = adaptive->k_start;
    k_cap = adaptive->k_cap > 0 ? adaptive->k_cap
                                : default_k_cap(adaptive->k_start, adaptive->step, config.n);
    pflug.thresh = adaptive->thresh;
    pflug.burnin = adaptive->burnin;
    pflug.step = adaptive->step;
  }
  if (k < 1 || k > config.n || k_cap > config.n) {
    throw std::invalid_argument("mode reaches k outside [1, n]");
  }

  std::vector<TraceRecord> trace;
  trace.reserve(config.max_iterations);
  for (long j = 1; j <= config.max_iterations; ++j) {
    if (scheduled) k = scheduled->schedule.active_k(state.wall_clock);

    StepResult step = step_fastest_k(state, k, shards, dataset, objective,
                                     config.response_times, config.eta, rng);
    TraceRecord rec;
    rec.iteration = state.iteration;
    rec.wall_clock = state.wall_clock;
    rec.k = k;
    rec.error = objective.loss(dataset, state.weights) - optimum.loss_star;
    if (adaptive) {
      PflugResult pr = pflug_update(pflug, step.gradient_estimate, k, k_cap);
      rec.switched = pr.switched;
      rec.count_negative = pflug.count_negative;
      k = pr.new_k;  // takes effect next iteration
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace

std::vector<TraceRecord> run_with(const Dataset& dataset, const Optimum& optimum,
                                  const RunConfig& config, const Objective& objective) {
  validate_common(config);
  if (std::holds_alternative<ModeAsync>(config.mode)) {
    return run_async(dataset, optimum, config, objective);
  }
  return run_synchronous(dataset, optimum, config, objective);
}

std::vector<TraceRecord> run(const RunConfig& config) {
  Dataset dataset = generate_synthetic(config.m, config.d, config.data_seed);
  Optimum optimum = solve_optimum(dataset);
  return run_with(dataset, optimum, config);
}

std::vector<TraceRecord> run_async(const Dataset& dataset, const Optimum& optimum,
                                   const RunConfig& config, const Objective& objective) {
  validate_common(config);
  if (!(config.horizon > 0)) {
    throw std::invalid_argument("async mode requires a positive wall-clock horizon");
  }
  const std::vector<Shard> shards = shard(dataset, config.n);
  const int n = config.n;
  Rng rng = Rng::derive(config.master_seed, 0);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dataset.dim());
  // Each worker holds the model version it last received and the absolute
  // time at which its current computation completes.
  std::vector<Eigen::VectorXd> dispatched(n, w);
  std::vector<double> completion(n);
  for (int i = 0; i < n; ++i) completion[i] = config.response_times.sample(rng);

  std::vector<TraceRecord> trace;
  long updates = 0;
  while (updates < config.max_iterations) {
    // Next completion; ties resolve to the lowest worker index.
    int next = 0;
    for (int i = 1; i < n; ++i) {
      if (completion[i] < completion[next]) next = i;
    }
    const double now = completion[next];
    if (now > config.horizon) break;

    Eigen::VectorXd g = objective.partial_gradient(dataset, shards[next], dispatched[next]);
    w -= config.eta * g;
    ++updates;

    TraceRecord rec;
    rec.iteration = updates;
    rec.wall_clock = now;
    rec.k = 1;
    rec.error = objective.loss(dataset, w) - optimum.loss_star;
    trace.push_back(std::move(rec));

    dispatched[next] = w;
    completion[next] = now + config.response_times.sample(rng);
  }
  return trace;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::string out = "iteration,wall_clock,k,error,count_negative,switched\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iteration);
    out += ',';
    out += format_double(r.wall_clock);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += format_double(r.error);
    out += ',';
    out += std::to_string(r.count_negative);
    out += ',';
    out += r.switched ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << trace_to_csv(trace);
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "iteration,wall_clock,k,error,count_negative,switched") {
    throw std::runtime_error(path + ": not a trace CSV");
  }
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    TraceRecord r;
    std::getline(ss, cell, ','); r.iteration = std::stol(cell);
    std::getline(ss, cell, ','); r.wall_clock = std::stod(cell);
    std::getline(ss, cell, ','); r.k = std::stoi(cell);
    std::getline(ss, cell, ','); r.error = std::stod(cell);
    std::getline(ss, cell, ','); r.count_negative = std::stol(cell);
    std::getline(ss, cell, ','); r.switched = cell == "1";
    trace.push_back(r);
  }
  return trace;
}

}  // namespace fastk
