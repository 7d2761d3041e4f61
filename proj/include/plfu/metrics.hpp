#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "plfu/cache_engine.hpp"
#include "plfu/types.hpp"
#include "plfu/workload.hpp"

namespace plfu {

struct RunReport {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  double chr = 0.0;
  std::uint64_t peak_resident = 0;
  std::uint64_t peak_parked = 0;
  std::uint64_t final_resident = 0;
  std::uint64_t final_parked = 0;

  bool operator==(const RunReport&) const = default;
};

/// Compulsory misses count as misses. Throws Error(EmptyEvents) on empty input.
RunReport summarize(std::span<const AccessEvent> events, const MetadataPeaks& peaks,
                    const MetadataSize& final_size);
RunReport summarize(std::span<const AccessEvent> events, const CacheEngine& engine);

/// Builds a report from plain counters; chr is 0 when nothing was requested.
RunReport make_report(std::uint64_t hits, std::uint64_t misses, const CacheEngine& engine);

std::string to_json(const RunReport& report, int indent = 2);
RunReport report_from_json(const std::string& text);

struct ScatterPoint {
  std::uint64_t rank = 0;
  std::uint64_t occurrence_index = 0;  // 1-based, per object
  Outcome outcome = Outcome::Miss;

  bool operator==(const ScatterPoint&) const = default;
};

using RankMap = std::unordered_map<ObjectId, std::uint64_t>;

/// Synthetic traces: rank = id. Otherwise by request count descending, ties to the smaller id.
RankMap popularity_ranks(const Trace& trace);

/// One point per event, ordered by (rank, occurrence_index).
/// Throws Error(UnknownObject) when an event's object has no rank.
std::vector<ScatterPoint> scatter(std::span<const AccessEvent> events, const RankMap& ranks);

struct ObjectOutcomes {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;

  double miss_ratio() const noexcept {
    const auto total = hits + misses;
    return total == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(total);
  }
};

std::unordered_map<ObjectId, ObjectOutcomes> per_object_outcomes(
    std::span<const AccessEvent> events);

inline constexpr double kStarvationMissRatio = 0.9;

/// Objects ranked at most max_rank whose miss ratio exceeds the threshold
/// ("red columns" in a rank-order hit/miss scatter).
std::size_t starved_objects(std::span<const AccessEvent> events, const RankMap& ranks,
                            std::uint64_t max_rank,
                            double threshold = kStarvationMissRatio);

void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points);
void write_events_csv(std::ostream& out, std::span<const AccessEvent> events);

}  // namespace plfu
