#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plfu/bench.hpp"
#include "plfu/cache_engine.hpp"
#include "plfu/metrics.hpp"
#include "plfu/workload.hpp"

namespace py = pybind11;
using namespace plfu;

namespace {

CacheConfig make_config(std::size_t capacity, Policy policy,
                        std::optional<std::vector<ObjectId>> hot_set) {
  CacheConfig config{capacity, policy, std::nullopt};
  if (hot_set) config.hot_set = HotSet(hot_set->begin(), hot_set->end());
  return config;
}

Trace ingested(std::vector<ObjectId> requests) {
  Trace trace;
  trace.requests = std::move(requests);
  return trace;
}

py::dict grid_dict(const SweepGrid& g) {
  py::dict d;
  d["metric"] = std::string(to_string(g.metric));
  d["rows"] = g.rows;
  d["cols"] = g.cols;
  d["values"] = g.values;
  d["stddev"] = g.stddev;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LFU / PLFU / PLFUA cache-management simulator";

  static py::exception<Error> error(m, "PlfuError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::enum_<Policy>(m, "Policy")
      .value("LFU", Policy::LFU)
      .value("PLFU", Policy::PLFU)
      .value("PLFUA", Policy::PLFUA);
  py::enum_<Outcome>(m, "Outcome").value("Hit", Outcome::Hit).value("Miss", Outcome::Miss);
  m.def("parse_policy", [](const std::string& s) { return parse_policy(s); });

  py::class_<AccessEvent>(m, "AccessEvent")
      .def_readonly("seq", &AccessEvent::seq)
      .def_readonly("object", &AccessEvent::object)
      .def_readonly("outcome", &AccessEvent::outcome)
      .def_readonly("evicted", &AccessEvent::evicted)
      .def_property_readonly("hit", [](const AccessEvent& e) { return e.outcome == Outcome::Hit; })
      .def("__eq__", [](const AccessEvent& a, const AccessEvent& b) { return a == b; })
      .def("__repr__", [](const AccessEvent& e) {
        return "AccessEvent(seq=" + std::to_string(e.seq) + ", object=" + std::to_string(e.object) +
               ", outcome=" + std::string(to_string(e.outcome)) + ")";
      });

  py::class_<CacheEngine>(m, "CacheEngine")
      .def(py::init([](std::size_t capacity, Policy policy,
                       std::optional<std::vector<ObjectId>> hot_set) {
             return CacheEngine(make_config(capacity, policy, std::move(hot_set)));
           }),
           py::arg("capacity"), py::arg("policy"), py::arg("hot_set") = py::none())
      .def("access", &CacheEngine::access, py::arg("object"))
      .def("metadata_size",
           [](const CacheEngine& e) {
             const auto s = e.metadata_size();
             return py::make_tuple(s.resident_count, s.parked_count);
           })
      .def("resident_frequency", &CacheEngine::resident_frequency)
      .def("parked_frequency", &CacheEngine::parked_frequency)
      .def("resident", &CacheEngine::resident_snapshot)
      .def("parked", &CacheEngine::parked_snapshot)
      .def_property_readonly("capacity", &CacheEngine::capacity)
      .def_property_readonly("policy", &CacheEngine::policy)
      .def_property_readonly("request_seq", &CacheEngine::request_seq);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("hits", &RunReport::hits)
      .def_readonly("misses", &RunReport::misses)
      .def_readonly("chr", &RunReport::chr)
      .def_readonly("peak_resident", &RunReport::peak_resident)
      .def_readonly("peak_parked", &RunReport::peak_parked)
      .def_readonly("final_resident", &RunReport::final_resident)
      .def_readonly("final_parked", &RunReport::final_parked)
      .def("to_json", [](const RunReport& r) { return to_json(r); });

  py::class_<ScatterPoint>(m, "ScatterPoint")
      .def_readonly("rank", &ScatterPoint::rank)
      .def_readonly("occurrence_index", &ScatterPoint::occurrence_index)
      .def_readonly("outcome", &ScatterPoint::outcome);

  m.def("zipf_pmf", &zipf_pmf, py::arg("n_objects"), py::arg("alpha"));
  m.def(
      "generate",
      [](std::size_t n, double alpha, std::size_t requests, std::uint64_t seed) {
        return generate({n, alpha, requests, seed}).requests;
      },
      py::arg("n_objects"), py::arg("alpha") = 1.1, py::arg("n_requests") = 100'000,
      py::arg("seed") = 0);
  m.def(
      "ingest_sessions",
      [](const std::vector<std::tuple<std::int64_t, std::int64_t, ObjectId>>& rows,
         std::int64_t min_duration, std::optional<std::pair<std::int64_t, std::int64_t>> window) {
        std::vector<SessionRecord> records;
        for (const auto& [s, e, c] : rows) records.push_back({s, e, c});
        std::optional<TimeWindow> w;
        if (window) w = TimeWindow{window->first, window->second};
        return ingest_sessions(records, min_duration, w).requests;
      },
      py::arg("records"), py::arg("min_duration") = kDefaultMinSessionSeconds,
      py::arg("window") = py::none());
  m.def(
      "hot_set",
      [](std::vector<ObjectId> requests, std::size_t capacity) {
        const auto set = hot_set(ingested(std::move(requests)), capacity);
        std::vector<ObjectId> out(set.begin(), set.end());
        std::sort(out.begin(), out.end());
        return out;
      },
      py::arg("requests"), py::arg("capacity"), "Hot set from a counting pre-pass over requests.");
  m.def(
      "hot_set_for_zipf",
      [](std::size_t n, std::size_t capacity) {
        const auto set = hot_set_for_zipf(n, capacity);
        std::vector<ObjectId> out(set.begin(), set.end());
        std::sort(out.begin(), out.end());
        return out;
      },
      py::arg("n_objects"), py::arg("capacity"));

  m.def(
      "replay",
      [](Policy policy, std::size_t capacity, const std::vector<ObjectId>& trace,
         std::optional<std::vector<ObjectId>> hot_set) {
        auto r = replay(make_config(capacity, policy, std::move(hot_set)), trace);
        return py::make_tuple(std::move(r.events), r.report);
      },
      py::arg("policy"), py::arg("capacity"), py::arg("trace"), py::arg("hot_set") = py::none(),
      "Untimed run; returns (events, report).");
  m.def(
      "scatter",
      [](const std::vector<AccessEvent>& events, const std::unordered_map<ObjectId, std::uint64_t>& ranks) {
        return scatter(events, ranks);
      },
      py::arg("events"), py::arg("ranks"));
  m.def(
      "timed_run",
      [](Policy policy, const std::vector<ObjectId>& trace, std::size_t capacity,
         std::optional<std::vector<ObjectId>> hot_set) {
        std::optional<HotSet> hot;
        if (hot_set) hot = HotSet(hot_set->begin(), hot_set->end());
        TimedRun run;
        {
          py::gil_scoped_release release;
          run = timed_run(policy, trace, capacity, std::move(hot));
        }
        return py::make_tuple(run.report, run.cpu_seconds);
      },
      py::arg("policy"), py::arg("trace"), py::arg("capacity"), py::arg("hot_set") = py::none());

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("object_counts", &SweepConfig::object_counts)
      .def_readwrite("rates", &SweepConfig::rates)
      .def_readwrite("policies", &SweepConfig::policies)
      .def_readwrite("samples_per_case", &SweepConfig::samples_per_case)
      .def_readwrite("requests_per_sample", &SweepConfig::requests_per_sample)
      .def_readwrite("alpha", &SweepConfig::alpha)
      .def_readwrite("base_seed", &SweepConfig::base_seed);
  m.def("default_grid", &default_grid);
  m.def("capacity_for", &capacity_for, py::arg("n_objects"), py::arg("rate"));
  m.def(
      "run_sweep",
      [](const SweepConfig& config, unsigned jobs) {
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(config, SweepOptions{jobs, {}});
        }
        py::dict out;
        for (const auto& [policy, grids] : result.grids) {
          py::dict by_metric;
          for (const auto& g : grids) by_metric[py::str(std::string(to_string(g.metric)))] = grid_dict(g);
          out[py::str(std::string(to_string(policy)))] = by_metric;
        }
        return out;
      },
      py::arg("config"), py::arg("jobs") = 1,
      "Returns {policy: {metric: {rows, cols, values, stddev}}}.");
}
