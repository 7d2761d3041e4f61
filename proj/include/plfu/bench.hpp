#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plfu/cache_engine.hpp"
#include "plfu/metrics.hpp"
#include "plfu/types.hpp"

namespace plfu {

// ---------------------------------------------------------------------------
// CPU clock
// ---------------------------------------------------------------------------

enum class ClockSource { ThreadCpu, ProcessCpu, StdClock };

std::string_view to_string(ClockSource source);

/// Best available CPU-time clock: per-thread, then per-process, then std::clock.
struct CpuClock {
  ClockSource source;
  double resolution_seconds;

  static CpuClock detect();
  double now() const;
};

// ---------------------------------------------------------------------------
// Single runs
// ---------------------------------------------------------------------------

struct Replay {
  std::vector<AccessEvent> events;
  RunReport report;
  MetadataPeaks peaks;
};

/// Untimed run that records every AccessEvent.
Replay replay(const CacheConfig& config, std::span<const ObjectId> trace);

struct TimedRun {
  RunReport report;
  double cpu_seconds = 0.0;
  std::size_t peak_metadata = 0;  // max resident + parked
  ClockSource clock = ClockSource::ThreadCpu;
  bool clock_fallback = false;     // thread CPU time was unavailable
  bool above_resolution = true;    // cpu_seconds >= 1000 x clock resolution
};

inline constexpr double kResolutionMargin = 1000.0;

/**
 * Times only the access loop over an in-memory trace on the calling thread.
 * Engine construction and report assembly happen outside the timed region.
 */
TimedRun timed_run(Policy policy, std::span<const ObjectId> trace, std::size_t capacity,
                   std::optional<HotSet> hot_set = std::nullopt);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepConfig {
  std::vector<std::size_t> object_counts;
  std::vector<double> rates;
  std::vector<Policy> policies;
  std::size_t samples_per_case = 12;
  std::size_t requests_per_sample = 100'000;
  double alpha = 1.1;
  std::uint64_t base_seed = 0;
};

void validate(const SweepConfig& config);

/// `count` values evenly spaced in log scale from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// 10 object counts in [100, 100000] x 6 rates in [0.02, 0.25], all three
/// policies, 12 samples of 100,000 Zipf(1.1) requests.
SweepConfig default_grid();

/// floor(rate * n), at least 1.
std::size_t capacity_for(std::size_t n_objects, double rate);

/// splitmix64 chain over (base_seed, n_objects, bit pattern of rate, sample).
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t n_objects, double rate,
                          std::size_t sample);

inline constexpr const char* kSeedDerivationRule =
    "s = splitmix64(base_seed); s = splitmix64(s ^ n_objects); "
    "s = splitmix64(s ^ bits(rate as IEEE-754 double)); s = splitmix64(s ^ sample_index)";

enum class Metric { MeanChr, MeanCpuSeconds, MeanPeakMetadata };
inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::MeanChr, Metric::MeanCpuSeconds,
                                                      Metric::MeanPeakMetadata};

std::string_view to_string(Metric metric);

struct SweepGrid {
  Metric metric = Metric::MeanChr;
  std::vector<std::size_t> rows;  // object counts
  std::vector<double> cols;       // rates
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> stddev;

  double at(std::size_t n_objects, double rate) const;
};

/// Raw samples of one (N, rate) case, keyed by policy.
struct CellResult {
  std::size_t n_objects = 0;
  double rate = 0.0;
  std::size_t capacity = 0;
  std::map<Policy, std::vector<TimedRun>> runs;
};

/// Runs one case: generates samples_per_case traces and feeds each to every
/// configured policy.
CellResult run_cell(const SweepConfig& config, std::size_t n_objects, double rate);

struct SweepOptions {
  unsigned jobs = 1;  // cases run concurrently; 1 = sequential timing
  std::function<void(const CellResult&)> on_cell;
};

struct SweepResult {
  SweepConfig config;
  std::map<Policy, std::vector<SweepGrid>> grids;  // one grid per Metric, kAllMetrics order
  std::vector<CellResult> cells;                   // row-major over (N, rate)
  CpuClock clock{};
  std::size_t runs_below_resolution = 0;

  const SweepGrid& grid(Policy policy, Metric metric) const;
};

SweepResult run_sweep(const SweepConfig& config, const SweepOptions& options = {});

void write_grid_csv(std::ostream& out, const SweepGrid& grid, bool stddev);

std::string config_to_json(const SweepConfig& config, int indent = 2);
/// Missing keys fall back to default_grid() values.
SweepConfig config_from_json(const std::string& text);

struct HostDescriptor {
  std::string cpu_model;
  unsigned logical_cores = 0;
};

HostDescriptor describe_host();

std::string manifest_json(const SweepResult& result, const HostDescriptor& host,
                          unsigned jobs);

/// Writes <policy>_<metric>.csv and .stddev.csv pairs plus manifest.json.
std::vector<std::string> write_sweep_outputs(const SweepResult& result,
                                             const std::string& outdir, unsigned jobs);

}  // namespace plfu
