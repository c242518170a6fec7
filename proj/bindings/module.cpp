#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fastk/bounds.hpp"
#include "fastk/cluster.hpp"
#include "fastk/dataset.hpp"
#include "fastk/engine.hpp"
#include "fastk/model.hpp"

namespace py = pybind11;
using namespace fastk;

namespace {

Mode parse_mode(const py::dict& mode) {
  const std::string type = mode["type"].cast<std::string>();
  if (type == "fixed") {
    return ModeFixed{mode["k"].cast<int>()};
  }
  if (type == "adaptive") {
    ModeAdaptive m;
    m.k_start = mode["k_start"].cast<int>();
    m.step = mode["step"].cast<int>();
    m.thresh = mode["thresh"].cast<long>();
    m.burnin = mode["burnin"].cast<long>();
    if (mode.contains("k_cap")) m.k_cap = mode["k_cap"].cast<int>();
    return m;
  }
  if (type == "async") {
    return ModeAsync{};
  }
  throw std::invalid_argument("unknown mode type: " + type);
}

RunConfig build_config(Eigen::Index m, Eigen::Index d, std::uint64_t data_seed, int n,
                       double eta, long max_iterations, double horizon,
                       const ResponseTimeModel& response_times, const py::dict& mode,
                       std::uint64_t master_seed) {
  RunConfig cfg;
  cfg.m = m;
  cfg.d = d;
  cfg.data_seed = data_seed;
  cfg.n = n;
  cfg.eta = eta;
  cfg.max_iterations = max_iterations;
  cfg.horizon = horizon;
  cfg.response_times = response_times;
  cfg.mode = parse_mode(mode);
  cfg.master_seed = master_seed;
  return cfg;
}

py::list trace_to_list(const std::vector<TraceRecord>& trace) {
  py::list out;
  for (const auto& r : trace) {
    py::dict row;
    row["iteration"] = r.iteration;
    row["wall_clock"] = r.wall_clock;
    row["k"] = r.k;
    row["error"] = r.error;
    row["count_negative"] = r.count_negative;
    row["switched"] = r.switched;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "fastest-k distributed SGD simulator core";

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("features", &Dataset::features)
      .def_readonly("labels", &Dataset::labels)
      .def_readonly("true_weights", &Dataset::true_weights)
      .def_readonly("seed", &Dataset::seed)
      .def("rows", &Dataset::rows)
      .def("dim", &Dataset::dim);

  py::class_<Shard>(m, "Shard")
      .def_readonly("row_indices", &Shard::row_indices)
      .def_readonly("worker_id", &Shard::worker_id);

  m.def("generate_synthetic", &generate_synthetic, py::arg("m"), py::arg("d"),
        py::arg("seed"));
  m.def("shard", &shard, py::arg("dataset"), py::arg("n"));

  py::class_<Optimum>(m, "Optimum")
      .def_readonly("weights_star", &Optimum::weights_star)
      .def_readonly("loss_star", &Optimum::loss_star);

  m.def("loss", py::overload_cast<const Dataset&, const Eigen::VectorXd&>(&loss));
  m.def("full_gradient",
        py::overload_cast<const Dataset&, const Eigen::VectorXd&>(&full_gradient));
  m.def("partial_gradient",
        py::overload_cast<const Dataset&, const Shard&, const Eigen::VectorXd&>(
            &partial_gradient));
  m.def("solve_optimum", py::overload_cast<const Dataset&>(&solve_optimum));

  py::class_<ResponseTimeModel>(m, "ResponseTimeModel")
      .def_static("exponential", &ResponseTimeModel::exponential, py::arg("rate"))
      .def_static("shifted_exponential", &ResponseTimeModel::shifted_exponential,
                  py::arg("shift"), py::arg("rate"))
      .def_static("deterministic", &ResponseTimeModel::deterministic, py::arg("value"));

  py::enum_<ExpMeanScaling>(m, "ExpMeanScaling")
      .value("by_rate", ExpMeanScaling::by_rate)
      .value("harmonic_only", ExpMeanScaling::harmonic_only);

  py::class_<OrderStatSummary>(m, "OrderStatSummary")
      .def_readonly("n", &OrderStatSummary::n)
      .def_readonly("means", &OrderStatSummary::means)
      .def_readonly("variances", &OrderStatSummary::variances)
      .def_readonly("method", &OrderStatSummary::method);

  m.def(
      "mean_order_statistic",
      [](const ResponseTimeModel& model, int n, int k, ExpMeanScaling scaling) {
        return mean_order_statistic(model, n, k, {}, scaling);
      },
      py::arg("model"), py::arg("n"), py::arg("k"),
      py::arg("scaling") = ExpMeanScaling::by_rate);
  m.def(
      "var_order_statistic",
      [](const ResponseTimeModel& model, int n, int k) {
        return var_order_statistic(model, n, k);
      },
      py::arg("model"), py::arg("n"), py::arg("k"));
  m.def(
      "summarize_order_stats",
      [](const ResponseTimeModel& model, int n, ExpMeanScaling scaling) {
        return summarize_order_stats(model, n, {}, scaling);
      },
      py::arg("model"), py::arg("n"), py::arg("scaling") = ExpMeanScaling::by_rate);

  py::class_<BoundParams>(m, "BoundParams")
      .def(py::init([](double eta, double L, double c, double sigma2, double s,
                       double F0, double epsilon) {
             BoundParams p;
             p.eta = eta;
             p.L = L;
             p.c = c;
             p.sigma2 = sigma2;
             p.s = s;
             p.F0 = F0;
             p.epsilon = epsilon;
             p.validate();
             return p;
           }),
           py::arg("eta"), py::arg("L"), py::arg("c"), py::arg("sigma2"), py::arg("s"),
           py::arg("F0"), py::arg("epsilon") = 0.0)
      .def_readwrite("eta", &BoundParams::eta)
      .def_readwrite("L", &BoundParams::L)
      .def_readwrite("c", &BoundParams::c)
      .def_readwrite("sigma2", &BoundParams::sigma2)
      .def_readwrite("s", &BoundParams::s)
      .def_readwrite("F0", &BoundParams::F0)
      .def_readwrite("epsilon", &BoundParams::epsilon);

  m.def("stationary_floor", &stationary_floor, py::arg("params"), py::arg("k"));
  m.def("error_bound_iterations", &error_bound_iterations, py::arg("params"),
        py::arg("k"), py::arg("j"));
  m.def("error_bound_time", &error_bound_time, py::arg("params"), py::arg("mu_k"),
        py::arg("k"), py::arg("t"));
  m.def("confidence_level", &confidence_level, py::arg("params"), py::arg("sigma_k2"),
        py::arg("mu_k"), py::arg("t"));

  py::class_<SwitchEntry>(m, "SwitchEntry")
      .def_readonly("t", &SwitchEntry::t)
      .def_readonly("k", &SwitchEntry::k);

  py::class_<SwitchSchedule>(m, "SwitchSchedule")
      .def_readonly("k_start", &SwitchSchedule::k_start)
      .def_readonly("k_max", &SwitchSchedule::k_max)
      .def_readonly("entries", &SwitchSchedule::entries)
      .def_readonly("diagnostics", &SwitchSchedule::diagnostics)
      .def("active_k", &SwitchSchedule::active_k, py::arg("t"));

  m.def("switching_schedule", &switching_schedule, py::arg("params"),
        py::arg("order_stats"), py::arg("n"), py::arg("k_start"));
  m.def("piecewise_bound_curve", &piecewise_bound_curve, py::arg("params"),
        py::arg("schedule"), py::arg("order_stats"), py::arg("t_grid"));

  m.def(
      "run",
      [](Eigen::Index mrows, Eigen::Index d, std::uint64_t data_seed, int n, double eta,
         long max_iterations, double horizon, const ResponseTimeModel& response_times,
         const py::dict& mode, std::uint64_t master_seed) {
        const RunConfig cfg = build_config(mrows, d, data_seed, n, eta, max_iterations,
                                           horizon, response_times, mode, master_seed);
        return trace_to_list(run(cfg));
      },
      py::arg("m"), py::arg("d"), py::arg("data_seed"), py::arg("n"), py::arg("eta"),
      py::arg("max_iterations"), py::arg("horizon"), py::arg("response_times"),
      py::arg("mode"), py::arg("master_seed"));
}
