#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plfu/cache_engine.hpp"
#include "plfu/types.hpp"

namespace plfu {

struct ZipfSpec {
  std::size_t n_objects = 0;
  double alpha = 1.1;
  std::size_t n_requests = 0;
  std::uint64_t seed = 0;
};

void validate(const ZipfSpec& spec);

struct IngestedSource {
  std::string descriptor;
};

using Provenance = std::variant<ZipfSpec, IngestedSource>;

struct Trace {
  std::vector<ObjectId> requests;
  Provenance provenance = IngestedSource{};

  bool is_synthetic() const noexcept {
    return std::holds_alternative<ZipfSpec>(provenance);
  }
  std::size_t size() const noexcept { return requests.size(); }
};

/// p_i = i^-alpha / sum_k k^-alpha for ranks i = 1..n, stored at index i-1.
std::vector<double> zipf_pmf(std::size_t n_objects, double alpha);

/// Draws ranks by inverse-CDF lookup (binary search over the cumulative PMF).
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n_objects, double alpha);

  template <class Rng>
  ObjectId operator()(Rng& rng) const {
    return sample_at(uniform01(rng));
  }

  /// Rank whose CDF interval contains u, for u in [0, 1).
  ObjectId sample_at(double u) const;

  std::size_t n_objects() const noexcept { return cdf_.size(); }
  std::span<const double> cdf() const noexcept { return cdf_; }

  /// 53-bit uniform in [0, 1); portable across standard libraries.
  template <class Rng>
  static double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

 private:
  std::vector<double> cdf_;
};

/// Trace generator PRNG: std::mt19937_64 seeded directly with ZipfSpec::seed.
using TraceRng = std::mt19937_64;

Trace generate(const ZipfSpec& spec);

struct SessionRecord {
  std::int64_t start = 0;
  std::int64_t end = 0;
  ObjectId content = 0;
};

/// Half-open observation window [start, end) applied to session start times.
struct TimeWindow {
  std::int64_t start;
  std::int64_t end;
};

inline constexpr std::int64_t kDefaultMinSessionSeconds = 60;

/**
 * Keeps sessions lasting at least min_duration seconds whose start lies in
 * the window (all starts when no window is given) and emits one request per
 * session, ordered by start time then content id.
 */
Trace ingest_sessions(std::span<const SessionRecord> records,
                      std::int64_t min_duration = kDefaultMinSessionSeconds,
                      std::optional<TimeWindow> window = std::nullopt,
                      std::string source = "sessions");

/// Parses `start,end,content_id` CSV with a header row. Errors carry line numbers.
std::vector<SessionRecord> read_sessions_csv(std::istream& in);
std::vector<SessionRecord> read_sessions_csv_file(const std::string& path);

/// Plain-text trace: one decimal object id per line.
Trace read_trace(std::istream& in, std::string source = "stream");
Trace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);

/// Whitespace- or newline-separated ids, as accepted by --hotset-file.
HotSet read_hot_set_file(const std::string& path);

std::size_t distinct_objects(std::span<const ObjectId> requests);

/// Request counts sorted by count descending, ties by smaller id.
std::vector<std::pair<ObjectId, std::uint64_t>> frequency_ranking(
    std::span<const ObjectId> requests);

/**
 * Admission set of 2 * capacity ids: ranks 1..2C for synthetic traces, the
 * 2C most requested ids (ties to the smaller id) for ingested ones.
 * Throws Error(InsufficientObjects) when fewer than 2C objects exist.
 */
HotSet hot_set(const Trace& trace, std::size_t capacity);
HotSet hot_set_for_zipf(std::size_t n_objects, std::size_t capacity);

}  // namespace plfu
