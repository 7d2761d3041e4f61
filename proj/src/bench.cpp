#include "plfu/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <time.h>

#include "json.hpp"
#include "plfu/workload.hpp"

namespace plfu {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool clock_works(clockid_t id) {
  timespec ts{};
  return clock_gettime(id, &ts) == 0;
}

double read_clock(clockid_t id) {
  timespec ts{};
  clock_gettime(id, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

double clock_resolution(clockid_t id) {
  timespec ts{};
  if (clock_getres(id, &ts) != 0) return 1e-6;
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Sample standard deviation (n - 1); zero for a single sample.
Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

double metric_value(Metric metric, const TimedRun& run) {
  switch (metric) {
    case Metric::MeanChr:
      return run.report.chr;
    case Metric::MeanCpuSeconds:
      return run.cpu_seconds;
    case Metric::MeanPeakMetadata:
      return static_cast<double>(run.peak_metadata);
  }
  return 0.0;
}

std::string case_label(std::size_t n, double rate) {
  std::ostringstream os;
  os << "case N=" << n << ", rate=" << rate;
  return os.str();
}

}  // namespace

std::string_view to_string(ClockSource source) {
  switch (source) {
    case ClockSource::ThreadCpu:
      return "thread_cputime";
    case ClockSource::ProcessCpu:
      return "process_cputime";
    case ClockSource::StdClock:
      return "std_clock";
  }
  return "?";
}

CpuClock CpuClock::detect() {
  if (clock_works(CLOCK_THREAD_CPUTIME_ID)) {
    return {ClockSource::ThreadCpu, clock_resolution(CLOCK_THREAD_CPUTIME_ID)};
  }
  if (clock_works(CLOCK_PROCESS_CPUTIME_ID)) {
    return {ClockSource::ProcessCpu, clock_resolution(CLOCK_PROCESS_CPUTIME_ID)};
  }
  return {ClockSource::StdClock, 1.0 / static_cast<double>(CLOCKS_PER_SEC)};
}

double CpuClock::now() const {
  switch (source) {
    case ClockSource::ThreadCpu:
      return read_clock(CLOCK_THREAD_CPUTIME_ID);
    case ClockSource::ProcessCpu:
      return read_clock(CLOCK_PROCESS_CPUTIME_ID);
    case ClockSource::StdClock:
      break;
  }
  return static_cast<double>(std::clock()) / static_cast<double>(CLOCKS_PER_SEC);
}

Replay replay(const CacheConfig& config, std::span<const ObjectId> trace) {
  CacheEngine engine(config);
  Replay out;
  out.events.reserve(trace.size());
  for (ObjectId id : trace) out.events.push_back(engine.access(id));
  out.peaks = engine.peaks();
  std::uint64_t hits = 0;
  for (const auto& e : out.events) hits += e.outcome == Outcome::Hit;
  out.report = make_report(hits, out.events.size() - hits, engine);
  return out;
}

TimedRun timed_run(Policy policy, std::span<const ObjectId> trace, std::size_t capacity,
                   std::optional<HotSet> hot_set) {
  static const CpuClock clock = CpuClock::detect();

  CacheEngine engine(CacheConfig{capacity, policy, std::move(hot_set)});
  std::uint64_t hits = 0;

  const double start = clock.now();
  for (ObjectId id : trace) {
    hits += engine.access(id).outcome == Outcome::Hit;
  }
  const double stop = clock.now();

  TimedRun run;
  run.report = make_report(hits, trace.size() - hits, engine);
  run.cpu_seconds = std::max(0.0, stop - start);
  run.peak_metadata = engine.peaks().total;
  run.clock = clock.source;
  run.clock_fallback = clock.source != ClockSource::ThreadCpu;
  run.above_resolution = run.cpu_seconds >= kResolutionMargin * clock.resolution_seconds;
  return run;
}

void validate(const SweepConfig& config) {
  const auto fail = [](const std::string& why) {
    return Error(ErrorKind::InvalidConfig, "sweep config: " + why);
  };
  if (config.object_counts.empty()) throw fail("object_counts is empty");
  if (config.rates.empty()) throw fail("rates is empty");
  if (config.policies.empty()) throw fail("policies is empty");
  if (!std::is_sorted(config.object_counts.begin(), config.object_counts.end())) {
    throw fail("object_counts must be sorted");
  }
  if (!std::is_sorted(config.rates.begin(), config.rates.end())) {
    throw fail("rates must be sorted");
  }
  for (auto n : config.object_counts) {
    if (n < 1) throw fail("object counts must be positive");
  }
  for (double r : config.rates) {
    if (!(r > 0.0 && r < 1.0)) throw fail("rates must lie in (0, 1)");
  }
  for (auto n : config.object_counts) {
    for (double r : config.rates) {
      if (std::floor(r * static_cast<double>(n)) < 1.0) {
        throw fail("floor(rate x N) < 1 for " + case_label(n, r));
      }
    }
  }
  if (config.samples_per_case < 1) throw fail("samples_per_case must be positive");
  if (config.requests_per_sample < 1) throw fail("requests_per_sample must be positive");
  if (!(config.alpha > 0.0)) throw fail("alpha must be positive");
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

SweepConfig default_grid() {
  SweepConfig config;
  for (double n : log_spaced(100.0, 100'000.0, 10)) {
    config.object_counts.push_back(static_cast<std::size_t>(std::llround(n)));
  }
  config.rates = log_spaced(0.02, 0.25, 6);
  config.policies = {Policy::LFU, Policy::PLFU, Policy::PLFUA};
  return config;
}

std::size_t capacity_for(std::size_t n_objects, double rate) {
  const auto c = static_cast<std::size_t>(std::floor(rate * static_cast<double>(n_objects)));
  return std::max<std::size_t>(c, 1);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t n_objects, double rate,
                          std::size_t sample) {
  std::uint64_t s = splitmix64(base_seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(n_objects));
  s = splitmix64(s ^ std::bit_cast<std::uint64_t>(rate));
  s = splitmix64(s ^ static_cast<std::uint64_t>(sample));
  return s;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::MeanChr:
      return "mean_chr";
    case Metric::MeanCpuSeconds:
      return "mean_cpu_seconds";
    case Metric::MeanPeakMetadata:
      return "mean_peak_metadata";
  }
  return "?";
}

double SweepGrid::at(std::size_t n_objects, double rate) const {
  const auto r = std::find(rows.begin(), rows.end(), n_objects);
  const auto c = std::find(cols.begin(), cols.end(), rate);
  if (r == rows.end() || c == cols.end()) {
    throw Error(ErrorKind::InvalidParameter, "no grid cell for " + case_label(n_objects, rate));
  }
  return values[r - rows.begin()][c - cols.begin()];
}

CellResult run_cell(const SweepConfig& config, std::size_t n_objects, double rate) {
  CellResult cell;
  cell.n_objects = n_objects;
  cell.rate = rate;
  cell.capacity = capacity_for(n_objects, rate);
  try {
    std::optional<HotSet> hot;
    for (Policy p : config.policies) {
      if (p == Policy::PLFUA) hot = hot_set_for_zipf(n_objects, cell.capacity);
    }
    for (std::size_t s = 0; s < config.samples_per_case; ++s) {
      const Trace trace = generate(ZipfSpec{n_objects, config.alpha, config.requests_per_sample,
                                            derive_seed(config.base_seed, n_objects, rate, s)});
      for (Policy p : config.policies) {
        auto gate = p == Policy::PLFUA ? hot : std::nullopt;
        cell.runs[p].push_back(timed_run(p, trace.requests, cell.capacity, std::move(gate)));
      }
    }
  } catch (const Error& e) {
    throw Error(e.kind(), case_label(n_objects, rate) + ": " + e.what());
  }
  return cell;
}

const SweepGrid& SweepResult::grid(Policy policy, Metric metric) const {
  const auto& list = grids.at(policy);
  for (const auto& g : list) {
    if (g.metric == metric) return g;
  }
  throw Error(ErrorKind::InvalidParameter, "metric not present in sweep result");
}

SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options) {
  validate(config);

  struct Coord {
    std::size_t row, col;
  };
  std::vector<Coord> coords;
  for (std::size_t r = 0; r < config.object_counts.size(); ++r) {
    for (std::size_t c = 0; c < config.rates.size(); ++c) coords.push_back({r, c});
  }

  SweepResult result;
  result.config = config;
  result.clock = CpuClock::detect();
  result.cells.resize(coords.size());

  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= coords.size()) return;
      try {
        auto cell = run_cell(config, config.object_counts[coords[i].row],
                             config.rates[coords[i].col]);
        if (options.on_cell) {
          std::lock_guard lock(callback_mutex);
          options.on_cell(cell);
        }
        result.cells[i] = std::move(cell);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(coords.size());
        return;
      }
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t rows = config.object_counts.size();
  const std::size_t cols = config.rates.size();
  for (Policy policy : config.policies) {
    auto& list = result.grids[policy];
    for (Metric metric : kAllMetrics) {
      SweepGrid grid;
      grid.metric = metric;
      grid.rows = config.object_counts;
      grid.cols = config.rates;
      grid.values.assign(rows, std::vector<double>(cols, 0.0));
      grid.stddev.assign(rows, std::vector<double>(cols, 0.0));
      for (std::size_t i = 0; i < coords.size(); ++i) {
        std::vector<double> xs;
        for (const auto& run : result.cells[i].runs.at(policy)) xs.push_back(metric_value(metric, run));
        const auto m = moments(xs);
        grid.values[coords[i].row][coords[i].col] = m.mean;
        grid.stddev[coords[i].row][coords[i].col] = m.stddev;
      }
      list.push_back(std::move(grid));
    }
  }
  for (const auto& cell : result.cells) {
    for (const auto& [policy, runs] : cell.runs) {
      for (const auto& run : runs) result.runs_below_resolution += !run.above_resolution;
    }
  }
  return result;
}

void write_grid_csv(std::ostream& out, const SweepGrid& grid, bool stddev) {
  const auto& cells = stddev ? grid.stddev : grid.values;
  std::ostringstream os;
  os.precision(17);
  for (double rate : grid.cols) os << ',' << rate;
  os << '\n';
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    os << grid.rows[r];
    for (double v : cells[r]) os << ',' << v;
    os << '\n';
  }
  out << os.str();
}

std::string config_to_json(const SweepConfig& config, int indent) {
  nlohmann::ordered_json j;
  j["object_counts"] = config.object_counts;
  j["rates"] = config.rates;
  std::vector<std::string> policies;
  for (Policy p : config.policies) policies.emplace_back(to_string(p));
  j["policies"] = policies;
  j["samples_per_case"] = config.samples_per_case;
  j["requests_per_sample"] = config.requests_per_sample;
  j["alpha"] = config.alpha;
  j["base_seed"] = config.base_seed;
  return j.dump(indent);
}

SweepConfig config_from_json(const std::string& text) {
  SweepConfig config = default_grid();
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "sweep config must be a JSON object");
    if (j.contains("object_counts")) {
      config.object_counts = j["object_counts"].get<std::vector<std::size_t>>();
    }
    if (j.contains("rates")) config.rates = j["rates"].get<std::vector<double>>();
    if (j.contains("policies")) {
      config.policies.clear();
      for (const auto& p : j["policies"]) config.policies.push_back(parse_policy(p.get<std::string>()));
    }
    if (j.contains("samples_per_case")) config.samples_per_case = j["samples_per_case"].get<std::size_t>();
    if (j.contains("requests_per_sample")) {
      config.requests_per_sample = j["requests_per_sample"].get<std::size_t>();
    }
    if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
    if (j.contains("base_seed")) config.base_seed = j["base_seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("sweep config: ") + e.what());
  }
  validate(config);
  return config;
}

HostDescriptor describe_host() {
  HostDescriptor host;
  host.logical_cores = std::thread::hardware_concurrency();
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        host.cpu_model = line.substr(line.find_first_not_of(" \t", colon + 1));
      }
      break;
    }
  }
  if (host.cpu_model.empty()) host.cpu_model = "unknown";
  return host;
}

std::string manifest_json(const SweepResult& result, const HostDescriptor& host,
                          unsigned jobs) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(result.config));
  j["cache_size_rule"] = "capacity = max(1, floor(rate * N))";
  j["seed_derivation"] = kSeedDerivationRule;
  j["trace_rng"] = "std::mt19937_64, u = (x >> 11) * 2^-53, inverse-CDF binary search";
  j["host"] = {{"cpu_model", host.cpu_model}, {"logical_cores", host.logical_cores}};
  j["clock"] = {{"source", std::string(to_string(result.clock.source))},
                {"resolution_seconds", result.clock.resolution_seconds}};
  j["timing_mode"] = jobs <= 1 ? "sequential" : "parallel";
  j["jobs"] = jobs;
  j["runs_below_resolution_margin"] = result.runs_below_resolution;
  std::vector<std::string> files;
  for (const auto& [policy, grids] : result.grids) {
    for (const auto& g : grids) {
      const std::string stem = std::string(to_string(policy)) + "_" + std::string(to_string(g.metric));
      files.push_back(stem + ".csv");
      files.push_back(stem + ".stddev.csv");
    }
  }
  j["files"] = files;
  return j.dump(2);
}

std::vector<std::string> write_sweep_outputs(const SweepResult& result,
                                             const std::string& outdir, unsigned jobs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + outdir + "': " + ec.message());

  std::vector<std::string> written;
  const auto write_file = [&](const fs::path& path, const auto& body) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    body(out);
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
    written.push_back(path.string());
  };

  for (const auto& [policy, grids] : result.grids) {
    for (const auto& g : grids) {
      const std::string stem = std::string(to_string(policy)) + "_" + std::string(to_string(g.metric));
      write_file(fs::path(outdir) / (stem + ".csv"),
                 [&](std::ostream& out) { write_grid_csv(out, g, false); });
      write_file(fs::path(outdir) / (stem + ".stddev.csv"),
                 [&](std::ostream& out) { write_grid_csv(out, g, true); });
    }
  }
  write_file(fs::path(outdir) / "manifest.json", [&](std::ostream& out) {
    out << manifest_json(result, describe_host(), jobs) << '\n';
  });
  return written;
}

}  // namespace plfu
