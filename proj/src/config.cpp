#include "fastk/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace fastk {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& context) {
  if (!obj.is_object()) {
    throw std::invalid_argument(context + ": expected a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw std::invalid_argument(context + ": unknown key \"" + key + "\"");
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw std::invalid_argument(context + ": missing key \"" + key + "\"");
    }
  }
}

ResponseTimeModel parse_response_time(const json& j) {
  require_keys(j, {"kind", "rate", "shift", "value"}, {"kind"}, "response_time");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential") {
    require_keys(j, {"kind", "rate"}, {"kind", "rate"}, "response_time(exponential)");
    return ResponseTimeModel::exponential(j.at("rate").get<double>());
  }
  if (kind == "shifted_exponential") {
    require_keys(j, {"kind", "rate", "shift"}, {"kind", "rate", "shift"},
                 "response_time(shifted_exponential)");
    return ResponseTimeModel::shifted_exponential(j.at("shift").get<double>(),
                                                  j.at("rate").get<double>());
  }
  if (kind == "deterministic") {
    require_keys(j, {"kind", "value"}, {"kind", "value"}, "response_time(deterministic)");
    return ResponseTimeModel::deterministic(j.at("value").get<double>());
  }
  throw std::invalid_argument("response_time: unknown kind \"" + kind + "\"");
}

Mode parse_mode(const json& j, Eigen::Index m, std::string& name_out) {
  require_keys(j,
               {"type", "k", "k_start", "step", "thresh", "burnin", "burnin_fraction",
                "k_cap", "entries"},
               {"type"}, "mode");
  const std::string type = j.at("type").get<std::string>();
  if (type == "fixed") {
    require_keys(j, {"type", "k"}, {"type", "k"}, "mode(fixed)");
    const int k = j.at("k").get<int>();
    name_out = "fixed_k" + std::to_string(k);
    return ModeFixed{k};
  }
  if (type == "adaptive") {
    require_keys(j,
                 {"type", "k_start", "step", "thresh", "burnin", "burnin_fraction",
                  "k_cap"},
                 {"type", "k_start", "step", "thresh"}, "mode(adaptive)");
    ModeAdaptive mode;
    mode.k_start = j.at("k_start").get<int>();
    mode.step = j.at("step").get<int>();
    mode.thresh = j.at("thresh").get<long>();
    if (j.contains("burnin") == j.contains("burnin_fraction")) {
      throw std::invalid_argument(
          "mode(adaptive): exactly one of burnin / burnin_fraction is required");
    }
    if (j.contains("burnin")) {
      mode.burnin = j.at("burnin").get<long>();
    } else {
      mode.burnin = static_cast<long>(j.at("burnin_fraction").get<double>() *
                                      static_cast<double>(m));
    }
    if (j.contains("k_cap")) mode.k_cap = j.at("k_cap").get<int>();
    name_out = "adaptive";
    return mode;
  }
  if (type == "scheduled") {
    require_keys(j, {"type", "k_start", "entries"}, {"type", "k_start", "entries"},
                 "mode(scheduled)");
    ModeScheduled mode;
    mode.schedule.k_start = j.at("k_start").get<int>();
    mode.schedule.k_max = mode.schedule.k_start;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) {
        throw std::invalid_argument("mode(scheduled): entries must be [time, k] pairs");
      }
      mode.schedule.entries.push_back({e[0].get<double>(), e[1].get<int>()});
      mode.schedule.k_max = std::max(mode.schedule.k_max, e[1].get<int>());
    }
    name_out = "scheduled";
    return mode;
  }
  if (type == "async") {
    require_keys(j, {"type"}, {"type"}, "mode(async)");
    name_out = "async";
    return ModeAsync{};
  }
  throw std::invalid_argument("mode: unknown type \"" + type + "\"");
}

BoundsConfig parse_bounds(const json& j) {
  require_keys(j,
               {"eta", "L", "c", "sigma2", "s", "F0", "epsilon", "k_start", "horizon",
                "grid_points", "mean_scaling"},
               {"eta", "L", "c", "sigma2", "s", "F0", "horizon"}, "bounds");
  BoundsConfig b;
  b.params.eta = j.at("eta").get<double>();
  b.params.L = j.at("L").get<double>();
  b.params.c = j.at("c").get<double>();
  b.params.sigma2 = j.at("sigma2").get<double>();
  b.params.s = j.at("s").get<double>();
  b.params.F0 = j.at("F0").get<double>();
  if (j.contains("epsilon")) b.params.epsilon = j.at("epsilon").get<double>();
  if (j.contains("k_start")) b.k_start = j.at("k_start").get<int>();
  b.horizon = j.at("horizon").get<double>();
  if (j.contains("grid_points")) b.grid_points = j.at("grid_points").get<int>();
  if (j.contains("mean_scaling")) {
    const std::string scaling = j.at("mean_scaling").get<std::string>();
    if (scaling == "by_rate") {
      b.mean_scaling = ExpMeanScaling::by_rate;
    } else if (scaling == "harmonic_only") {
      b.mean_scaling = ExpMeanScaling::harmonic_only;
    } else {
      throw std::invalid_argument("bounds.mean_scaling must be by_rate or harmonic_only");
    }
  }
  b.params.validate();
  return b;
}

}  // namespace

RunConfig ExperimentConfig::run_config(std::size_t mode_index,
                                       std::uint64_t master_seed) const {
  RunConfig rc;
  rc.m = m;
  rc.d = d;
  rc.data_seed = data_seed;
  rc.n = n;
  rc.eta = eta;
  rc.max_iterations = max_iterations;
  rc.horizon = horizon;
  rc.response_times = response_times;
  rc.mode = modes.at(mode_index);
  rc.master_seed = master_seed;
  return rc;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  require_keys(j,
               {"version", "dataset", "workers", "eta", "max_iterations", "horizon",
                "response_time", "modes", "seeds", "output_dir", "bounds"},
               {"version"}, "config");
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("config: unsupported version (expected 1)");
  }

  ExperimentConfig cfg;
  if (j.contains("dataset")) {
    const json& ds = j.at("dataset");
    require_keys(ds, {"m", "d", "seed"}, {"m", "d", "seed"}, "dataset");
    cfg.m = ds.at("m").get<Eigen::Index>();
    cfg.d = ds.at("d").get<Eigen::Index>();
    cfg.data_seed = ds.at("seed").get<std::uint64_t>();
  }
  if (j.contains("workers")) cfg.n = j.at("workers").get<int>();
  if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
  if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<long>();
  if (j.contains("horizon")) cfg.horizon = j.at("horizon").get<double>();
  if (j.contains("response_time")) cfg.response_times = parse_response_time(j.at("response_time"));
  if (j.contains("modes")) {
    std::set<std::string> used;
    for (const auto& mj : j.at("modes")) {
      std::string name;
      cfg.modes.push_back(parse_mode(mj, cfg.m, name));
      std::string unique = name;
      int suffix = 2;
      while (used.count(unique)) unique = name + "_" + std::to_string(suffix++);
      used.insert(unique);
      cfg.mode_names.push_back(unique);
    }
  }
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("bounds")) cfg.bounds = parse_bounds(j.at("bounds"));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fastk
