#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastk/config.hpp"
#include "fastk/dataset.hpp"
#include "fastk/engine.hpp"
#include "fastk/model.hpp"
#include "fastk/svg.hpp"

namespace fs = std::filesystem;
using namespace fastk;

namespace {

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void apply_overrides(ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::string& out_dir) {
  if (seed) cfg.seeds = {*seed};
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  fs::create_directories(cfg.output_dir);
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  apply_overrides(cfg, seed, out_dir);
  if (cfg.modes.empty()) throw std::invalid_argument("config: no modes to simulate");
  if (cfg.seeds.empty()) throw std::invalid_argument("config: no seeds to simulate");

  Dataset dataset = generate_synthetic(cfg.m, cfg.d, cfg.data_seed);
  Optimum optimum = solve_optimum(dataset);

  std::vector<std::string> failures;
  for (std::size_t mi = 0; mi < cfg.modes.size(); ++mi) {
    for (std::uint64_t s : cfg.seeds) {
      const std::string name = cfg.mode_names[mi] + "_seed" + std::to_string(s);
      try {
        RunConfig rc = cfg.run_config(mi, s);
        std::vector<TraceRecord> trace = run_with(dataset, optimum, rc);
        const std::string path = (fs::path(cfg.output_dir) / (name + ".csv")).string();
        atomic_write_file(path, trace_to_csv(trace));
        std::string switches;
        for (const auto& r : trace) {
          if (r.switched) switches += " " + format_double(r.wall_clock);
        }
        if (switches.empty()) switches = " none";
        const TraceRecord& last = trace.back();
        std::cout << name << ": iterations=" << last.iteration
                  << " final_wall_clock=" << format_double(last.wall_clock)
                  << " final_error=" << format_double(last.error)
                  << " switch_times:" << switches << "\n";
      } catch (const std::exception& e) {
        failures.push_back(name + ": " + e.what());
      }
    }
  }
  for (const auto& f : failures) std::cerr << "FAILED " << f << "\n";
  return failures.empty() ? 0 : 1;
}

int cmd_bounds(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  apply_overrides(cfg, std::nullopt, out_dir);
  if (!cfg.bounds) throw std::invalid_argument("config: bounds block required");
  const BoundsConfig& bc = *cfg.bounds;
  const int n = cfg.n;

  OrderStatSummary os = summarize_order_stats(cfg.response_times, n, {}, bc.mean_scaling);
  SwitchSchedule schedule = switching_schedule(bc.params, os, n, bc.k_start);

  std::vector<double> grid;
  if (bc.horizon > 0) {
    grid.reserve(bc.grid_points);
    for (int i = 0; i < bc.grid_points; ++i) {
      grid.push_back(bc.horizon * i / static_cast<double>(bc.grid_points - 1));
    }
  }
  auto adaptive = piecewise_bound_curve(bc.params, schedule, os, grid);

  std::string csv = "t";
  for (int k = 1; k <= n; ++k) csv += ",k=" + std::to_string(k);
  csv += ",adaptive\n";
  std::vector<PlotSeries> series(n + 1);
  for (int k = 1; k <= n; ++k) series[k - 1].name = "k=" + std::to_string(k);
  series[n].name = "adaptive";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]);
    for (int k = 1; k <= n; ++k) {
      const double b = error_bound_time(bc.params, os.means[k - 1], k, grid[i]);
      csv += ',' + format_double(b);
      series[k - 1].points.emplace_back(grid[i], b);
    }
    csv += ',' + format_double(adaptive[i].second) + '\n';
    series[n].points.emplace_back(grid[i], adaptive[i].second);
  }

  const std::string csv_path = (fs::path(cfg.output_dir) / "bound_curves.csv").string();
  atomic_write_file(csv_path, csv);
  const std::string svg_path = (fs::path(cfg.output_dir) / "bound_curves.svg").string();
  atomic_write_file(svg_path, render_log_chart(series, "Error bound vs. wall-clock time",
                                               "wall-clock time", "error bound"));
  std::cout << "wrote " << csv_path << " and " << svg_path << "\n";
  for (const auto& d : schedule.diagnostics) std::cout << "diagnostic: " << d << "\n";
  return 0;
}

int cmd_schedule(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  apply_overrides(cfg, std::nullopt, out_dir);
  if (!cfg.bounds) throw std::invalid_argument("config: bounds block required");
  const BoundsConfig& bc = *cfg.bounds;

  OrderStatSummary os = summarize_order_stats(cfg.response_times, cfg.n, {}, bc.mean_scaling);
  SwitchSchedule schedule = switching_schedule(bc.params, os, cfg.n, bc.k_start);

  const std::string json = schedule_to_json(schedule);
  const std::string path = (fs::path(cfg.output_dir) / "schedule.json").string();
  atomic_write_file(path, json + "\n");
  std::cout << json << "\n";
  return 0;
}

int cmd_plot(const std::string& out_path, const std::vector<std::string>& trace_paths) {
  std::vector<PlotSeries> series;
  for (const auto& p : trace_paths) {
    PlotSeries s;
    s.name = fs::path(p).stem().string();
    for (const auto& r : read_trace_csv(p)) {
      s.points.emplace_back(r.wall_clock, r.error);
    }
    series.push_back(std::move(s));
  }
  atomic_write_file(out_path, render_log_chart(series, "Error vs. wall-clock time",
                                               "wall-clock time", "F(w) - F*"));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastest-k SGD straggler simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_value = 0;

  auto* sim = app.add_subcommand("simulate", "run the configured modes and write trace CSVs");
  sim->add_option("config", config_path, "experiment config JSON")->required();
  auto* sim_seed = sim->add_option("--seed", seed_value, "replace the config seed list");
  sim->add_option("--out-dir", out_dir, "override the output directory");

  auto* bnd = app.add_subcommand("bounds", "emit fixed-k and adaptive bound curves");
  bnd->add_option("config", config_path, "experiment config JSON")->required();
  bnd->add_option("--out-dir", out_dir, "override the output directory");

  auto* sch = app.add_subcommand("schedule", "compute the bound-optimal switching schedule");
  sch->add_option("config", config_path, "experiment config JSON")->required();
  sch->add_option("--out-dir", out_dir, "override the output directory");

  std::string plot_out;
  std::vector<std::string> plot_traces;
  auto* plt = app.add_subcommand("plot", "overlay trace CSVs as a log-scale SVG chart");
  plt->add_option("output", plot_out, "output SVG path")->required();
  plt->add_option("traces", plot_traces, "trace CSV files")->required()->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (sim_seed->count() > 0) seed_override = seed_value;
      return cmd_simulate(config_path, seed_override, out_dir);
    }
    if (bnd->parsed()) return cmd_bounds(config_path, out_dir);
    if (sch->parsed()) return cmd_schedule(config_path, out_dir);
    if (plt->parsed()) return cmd_plot(plot_out, plot_traces);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
