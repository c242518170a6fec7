#include "fastk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace fastk {

void BoundParams::validate() const {
  if (!(eta > 0 && L > 0 && c > 0 && sigma2 > 0 && s > 0 && F0 > 0)) {
    throw std::invalid_argument("bound parameters must be positive");
  }
  if (!(epsilon >= 0 && epsilon < 1)) {
    throw std::invalid_argument("epsilon must lie in [0, 1)");
  }
  if (!(eta * c < 1)) {
    throw std::invalid_argument("eta * c must be < 1 for the geometric term to contract");
  }
}

double stationary_floor(const BoundParams& p, int k) {
  return p.eta * p.L * p.sigma2 / (2.0 * p.c * k * p.s);
}

double error_bound_iterations(const BoundParams& p, int k, long j) {
  p.validate();
  if (k < 1 || j < 0) throw std::invalid_argument("k >= 1 and j >= 0 required");
  const double floor = stationary_floor(p, k);
  return floor + std::pow(1.0 - p.eta * p.c, static_cast<double>(j)) * (p.F0 - floor);
}

double error_bound_time(const BoundParams& p, double mu_k, int k, double t) {
  p.validate();
  if (k < 1 || !(mu_k > 0) || t < 0) {
    throw std::invalid_argument("k >= 1, mu_k > 0 and t >= 0 required");
  }
  const double floor = stationary_floor(p, k);
  const double exponent = (t / mu_k) * (1.0 - p.epsilon);
  return floor + std::pow(1.0 - p.eta * p.c, exponent) * (p.F0 - floor);
}

double confidence_level(const BoundParams& p, double sigma_k2, double mu_k,
                        double t) {
  if (!(p.epsilon > 0)) {
    throw std::invalid_argument("confidence level undefined for epsilon = 0");
  }
  if (!(t > 0)) throw std::invalid_argument("t must be positive");
  const double level =
      1.0 - (sigma_k2 / (p.epsilon * p.epsilon)) * (2.0 / (t * mu_k) + 1.0 / (t * t));
  return std::clamp(level, 0.0, 1.0);
}

int SwitchSchedule::active_k(double t) const {
  int k = k_start;
  for (const auto& e : entries) {
    if (e.t <= t) k = e.k;
    else break;
  }
  return k;
}

SwitchSchedule switching_schedule(const BoundParams& p,
                                  const OrderStatSummary& order_stats, int n,
                                  int k_start) {
  p.validate();
  if (n < 1 || k_start < 1 || k_start > n) {
    throw std::invalid_argument("need 1 <= k_start <= n");
  }
  if (static_cast<int>(order_stats.means.size()) < n) {
    throw std::invalid_argument("order statistic summary smaller than n");
  }

  SwitchSchedule sched;
  sched.k_start = k_start;
  sched.k_max = k_start;

  const double decay = -std::log1p(-p.eta * p.c);  // -ln(1 - eta*c)
  double t_prev = 0.0;
  double sub = p.F0;  // bound-evaluated suboptimality at t_prev (epsilon dropped)

  for (int k = k_start; k < n; ++k) {
    const double mu_k = order_stats.means[k - 1];
    const double mu_k1 = order_stats.means[k];
    if (!(mu_k1 > mu_k)) {
      throw std::invalid_argument(
          "switching schedule requires strictly increasing order-statistic means "
          "(continuous response-time distribution)");
    }
    const double gap_arg = mu_k1 - mu_k;
    const double scale_arg = p.eta * p.L * p.sigma2 * mu_k;
    const double progress_arg =
        2.0 * p.c * k * (k + 1) * p.s * sub - p.eta * p.L * (k + 1) * p.sigma2;
    if (!(progress_arg > 0)) {
      sched.diagnostics.push_back(
          "schedule truncated at k=" + std::to_string(k) +
          ": remaining suboptimality already at the switch boundary");
      break;
    }
    double t_k = t_prev + (mu_k / decay) * (std::log(gap_arg) - std::log(scale_arg) +
                                            std::log(progress_arg));
    if (t_k <= t_prev) {
      sched.diagnostics.push_back("zero-length segment at k=" + std::to_string(k) +
                                  ": switch applied immediately");
      t_k = t_prev;
    }
    const double floor = stationary_floor(p, k);
    sub = floor + std::pow(1.0 - p.eta * p.c, (t_k - t_prev) / mu_k) * (sub - floor);
    sched.entries.push_back({t_k, k + 1});
    sched.k_max = k + 1;
    t_prev = t_k;
  }
  return sched;
}

std::vector<std::pair<double, double>> piecewise_bound_curve(
    const BoundParams& p, const SwitchSchedule& schedule,
    const OrderStatSummary& order_stats, const std::vector<double>& t_grid) {
  p.validate();
  if (t_grid.empty()) throw std::invalid_argument("empty time grid");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("time grid must be sorted ascending");
  }

  // Segment starts: (time, k, suboptimality at segment start).
  struct Segment {
    double t0;
    int k;
    double sub0;
  };
  std::vector<Segment> segments;
  segments.push_back({0.0, schedule.k_start, p.F0});
  for (const auto& e : schedule.entries) {
    const Segment& prev = segments.back();
    const double mu = order_stats.means[prev.k - 1];
    const double floor = stationary_floor(p, prev.k);
    const double exponent = ((e.t - prev.t0) / mu) * (1.0 - p.epsilon);
    const double sub_at_switch =
        floor + std::pow(1.0 - p.eta * p.c, exponent) * (prev.sub0 - floor);
    segments.push_back({e.t, e.k, sub_at_switch});
  }

  std::vector<std::pair<double, double>> curve;
  curve.reserve(t_grid.size());
  std::size_t seg = 0;
  for (double t : t_grid) {
    if (t < 0) throw std::invalid_argument("time grid must be non-negative");
    while (seg + 1 < segments.size() && segments[seg + 1].t0 <= t) ++seg;
    const Segment& s = segments[seg];
    const double mu = order_stats.means[s.k - 1];
    const double floor = stationary_floor(p, s.k);
    const double exponent = ((t - s.t0) / mu) * (1.0 - p.epsilon);
    curve.emplace_back(t, floor + std::pow(1.0 - p.eta * p.c, exponent) * (s.sub0 - floor));
  }
  return curve;
}

std::string schedule_to_json(const SwitchSchedule& s) {
  nlohmann::json j;
  j["k_start"] = s.k_start;
  j["k_max"] = s.k_max;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : s.entries) {
    j["entries"].push_back({{"t", e.t}, {"k", e.k}});
  }
  j["diagnostics"] = s.diagnostics;
  return j.dump(2);
}

SwitchSchedule schedule_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SwitchSchedule s;
  s.k_start = j.at("k_start").get<int>();
  s.k_max = j.at("k_max").get<int>();
  for (const auto& e : j.at("entries")) {
    s.entries.push_back({e.at("t").get<double>(), e.at("k").get<int>()});
  }
  if (j.contains("diagnostics")) {
    s.diagnostics = j["diagnostics"].get<std::vector<std::string>>();
  }
  return s;
}

}  // namespace fastk
