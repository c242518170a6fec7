#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastk/rng.hpp"

namespace fastk {

// Per-iteration worker response time distribution. Times are iid across
// workers and across iterations.
struct ResponseTimeModel {
  enum class Kind { exponential, shifted_exponential, deterministic };

  Kind kind = Kind::exponential;
  double rate = 1.0;   // exponential, shifted_exponential
  double shift = 0.0;  // shifted_exponential
  double value = 1.0;  // deterministic

  static ResponseTimeModel exponential(double rate);
  static ResponseTimeModel shifted_exponential(double shift, double rate);
  static ResponseTimeModel deterministic(double value);

  double sample(Rng& rng) const;
  bool is_continuous() const { return kind != Kind::deterministic; }
};

std::vector<double> sample_response_times(const ResponseTimeModel& model, int n,
                                          Rng& rng);

// k-th smallest value, 1-based k. The input is not mutated.
double kth_order_statistic(const std::vector<double>& times, int k);

struct MonteCarloSpec {
  long samples = 1'000'000;
  std::uint64_t seed = 20240915;
};

// Example-2 style parameterization writes the exponential order-statistic
// mean as the bare harmonic difference H_n - H_{n-k}; the dimensionally
// consistent form divides by the rate.
enum class ExpMeanScaling { by_rate, harmonic_only };

double mean_order_statistic(const ResponseTimeModel& model, int n, int k,
                            const MonteCarloSpec& mc = {},
                            ExpMeanScaling scaling = ExpMeanScaling::by_rate);

double var_order_statistic(const ResponseTimeModel& model, int n, int k,
                           const MonteCarloSpec& mc = {});

// Moments of all n order statistics at once. method records how the numbers
// were obtained so cached summaries stay reproducible.
struct OrderStatSummary {
  int n = 0;
  std::vector<double> means;      // means[k-1] = mu_k
  std::vector<double> variances;  // variances[k-1] = sigma_k^2
  std::string method = "analytic";  // "analytic" or "monte_carlo"
  long mc_samples = 0;
  std::uint64_t mc_seed = 0;
};

OrderStatSummary summarize_order_stats(const ResponseTimeModel& model, int n,
                                       const MonteCarloSpec& mc = {},
                                       ExpMeanScaling scaling = ExpMeanScaling::by_rate);

std::string order_stat_summary_to_json(const OrderStatSummary& s);
OrderStatSummary order_stat_summary_from_json(const std::string& text);

double harmonic_number(int n);

}  // namespace fastk
