#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fastk/cluster.hpp"

namespace fastk {

// Constants feeding the closed-form error bounds. All are configuration
// inputs; nothing is estimated from data.
struct BoundParams {
  double eta = 0.0;     // step size
  double L = 0.0;       // Lipschitz constant
  double c = 0.0;       // strong convexity constant
  double sigma2 = 0.0;  // variance bound on the gradient estimate
  double s = 0.0;       // shard size
  double F0 = 0.0;      // initial suboptimality F(w0) - F*
  double epsilon = 0.0; // constant error term in the time bound, in [0, 1)

  void validate() const;
};

// Stationary-phase floor eta*L*sigma2 / (2*c*k*s).
double stationary_floor(const BoundParams& p, int k);

// Expected suboptimality after j iterations at fixed k.
double error_bound_iterations(const BoundParams& p, int k, long j);

// Expected suboptimality after wall-clock time t at fixed k, where mu_k is
// the mean per-iteration time (k-th order statistic mean).
double error_bound_time(const BoundParams& p, double mu_k, int k, double t);

// Probability with which the time bound holds, clamped to [0, 1].
double confidence_level(const BoundParams& p, double sigma_k2, double mu_k,
                        double t);

struct SwitchEntry {
  double t = 0.0;  // wall-clock time of the switch
  int k = 0;       // value of k active from t onward
};

// Bound-optimal switching times. entries hold the switch events only; the
// run starts at (t=0, k_start). diagnostics record truncation or clamping.
struct SwitchSchedule {
  int k_start = 1;
  int k_max = 1;  // largest k the schedule reaches
  std::vector<SwitchEntry> entries;
  std::vector<std::string> diagnostics;

  int active_k(double t) const;
};

SwitchSchedule switching_schedule(const BoundParams& p,
                                  const OrderStatSummary& order_stats, int n,
                                  int k_start);

// Adaptive bound curve: per grid point, the time bound for the schedule
// segment containing t, restarted at each switch so the curve is continuous.
std::vector<std::pair<double, double>> piecewise_bound_curve(
    const BoundParams& p, const SwitchSchedule& schedule,
    const OrderStatSummary& order_stats, const std::vector<double>& t_grid);

std::string schedule_to_json(const SwitchSchedule& s);
SwitchSchedule schedule_from_json(const std::string& text);

}  // namespace fastk
