#include "fastk/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace fastk {

ResponseTimeModel ResponseTimeModel::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
  ResponseTimeModel m;
  m.kind = Kind::exponential;
  m.rate = rate;
  return m;
}

ResponseTimeModel ResponseTimeModel::shifted_exponential(double shift, double rate) {
  if (!(rate > 0)) throw std::invalid_argument("shifted_exponential rate must be positive");
  if (shift < 0) throw std::invalid_argument("shifted_exponential shift must be >= 0");
  ResponseTimeModel m;
  m.kind = Kind::shifted_exponential;
  m.shift = shift;
  m.rate = rate;
  return m;
}

ResponseTimeModel ResponseTimeModel::deterministic(double value) {
  if (!(value > 0)) throw std::invalid_argument("deterministic value must be positive");
  ResponseTimeModel m;
  m.kind = Kind::deterministic;
  m.value = value;
  return m;
}

double ResponseTimeModel::sample(Rng& rng) const {
  switch (kind) {
    case Kind::exponential:
      return rng.exponential(rate);
    case Kind::shifted_exponential:
      return shift + rng.exponential(rate);
    case Kind::deterministic:
      return value;
  }
  throw std::logic_error("unreachable");
}

std::vector<double> sample_response_times(const ResponseTimeModel& model, int n,
                                          Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one worker");
  std::vector<double> times(n);
  for (int i = 0; i < n; ++i) times[i] = model.sample(rng);
  return times;
}

double kth_order_statistic(const std::vector<double>& times, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > times.size()) {
    throw std::invalid_argument("order statistic index out of range");
  }
  std::vector<double> copy(times);
  std::nth_element(copy.begin(), copy.begin() + (k - 1), copy.end());
  return copy[k - 1];
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

namespace {

void check_range(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("order statistic index out of range");
  }
}

// Mean/variance of the k-th order statistic by direct simulation.
std::pair<double, double> mc_moments(const ResponseTimeModel& model, int n, int k,
                                     const MonteCarloSpec& mc) {
  Rng rng(mc.seed);
  double sum = 0.0, sumsq = 0.0;
  std::vector<double> times(n);
  for (long i = 0; i < mc.samples; ++i) {
    for (int w = 0; w < n; ++w) times[w] = model.sample(rng);
    std::nth_element(times.begin(), times.begin() + (k - 1), times.end());
    const double x = times[k - 1];
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / mc.samples;
  const double var = sumsq / mc.samples - mean * mean;
  return {mean, var};
}

}  // namespace

double mean_order_statistic(const ResponseTimeModel& model, int n, int k,
                            const MonteCarloSpec& mc, ExpMeanScaling scaling) {
  check_range(n, k);
  switch (model.kind) {
    case ResponseTimeModel::Kind::exponential: {
      const double h = harmonic_number(n) - harmonic_number(n - k);
      return scaling == ExpMeanScaling::by_rate ? h / model.rate : h;
    }
    case ResponseTimeModel::Kind::deterministic:
      return model.value;
    case ResponseTimeModel::Kind::shifted_exponential:
      return mc_moments(model, n, k, mc).first;
  }
  throw std::logic_error("unreachable");
}

double var_order_statistic(const ResponseTimeModel& model, int n, int k,
                           const MonteCarloSpec& mc) {
  check_range(n, k);
  switch (model.kind) {
    case ResponseTimeModel::Kind::exponential: {
      double v = 0.0;
      for (int i = n - k + 1; i <= n; ++i) {
        v += 1.0 / (model.rate * model.rate * static_cast<double>(i) * i);
      }
      return v;
    }
    case ResponseTimeModel::Kind::deterministic:
      return 0.0;
    case ResponseTimeModel::Kind::shifted_exponential:
      return mc_moments(model, n, k, mc).second;
  }
  throw std::logic_error("unreachable");
}

OrderStatSummary summarize_order_stats(const ResponseTimeModel& model, int n,
                                       const MonteCarloSpec& mc,
                                       ExpMeanScaling scaling) {
  if (n < 1) throw std::invalid_argument("need at least one worker");
  OrderStatSummary s;
  s.n = n;
  s.means.resize(n);
  s.variances.resize(n);
  if (model.kind == ResponseTimeModel::Kind::shifted_exponential) {
    // One pass over the samples covers every k: sort each draw and
    // accumulate moments per position.
    s.method = "monte_carlo";
    s.mc_samples = mc.samples;
    s.mc_seed = mc.seed;
    Rng rng(mc.seed);
    std::vector<double> times(n);
    std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
    for (long i = 0; i < mc.samples; ++i) {
      for (int w = 0; w < n; ++w) times[w] = model.sample(rng);
      std::sort(times.begin(), times.end());
      for (int k = 0; k < n; ++k) {
        sum[k] += times[k];
        sumsq[k] += times[k] * times[k];
      }
    }
    for (int k = 0; k < n; ++k) {
      s.means[k] = sum[k] / mc.samples;
      s.variances[k] = sumsq[k] / mc.samples - s.means[k] * s.means[k];
    }
  } else {
    s.method = "analytic";
    for (int k = 1; k <= n; ++k) {
      s.means[k - 1] = mean_order_statistic(model, n, k, mc, scaling);
      s.variances[k - 1] = var_order_statistic(model, n, k, mc);
    }
  }
  return s;
}

std::string order_stat_summary_to_json(const OrderStatSummary& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["means"] = s.means;
  j["variances"] = s.variances;
  j["method"] = s.method;
  if (s.method == "monte_carlo") {
    j["mc_samples"] = s.mc_samples;
    j["mc_seed"] = s.mc_seed;
  }
  return j.dump(2);
}

OrderStatSummary order_stat_summary_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  OrderStatSummary s;
  s.n = j.at("n").get<int>();
  s.means = j.at("means").get<std::vector<double>>();
  s.variances = j.at("variances").get<std::vector<double>>();
  s.method = j.at("method").get<std::string>();
  if (j.contains("mc_samples")) s.mc_samples = j["mc_samples"].get<long>();
  if (j.contains("mc_seed")) s.mc_seed = j["mc_seed"].get<std::uint64_t>();
  return s;
}

}  // namespace fastk
