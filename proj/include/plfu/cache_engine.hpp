#pragma once

#include <cstddef>
#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "plfu/types.hpp"

namespace plfu {

using HotSet = std::unordered_set<ObjectId>;

struct CacheConfig {
  std::size_t capacity = 0;
  Policy policy = Policy::LFU;
  // Admission set; must be present and non-empty for PLFUA, absent otherwise.
  std::optional<HotSet> hot_set;
};

/// Throws Error(InvalidConfig) when the config cannot build an engine.
void validate(const CacheConfig& config);

struct MetadataSize {
  std::size_t resident_count = 0;
  std::size_t parked_count = 0;

  bool operator==(const MetadataSize&) const = default;
};

/// High-water marks observed since construction.
struct MetadataPeaks {
  std::size_t resident = 0;
  std::size_t parked = 0;
  std::size_t total = 0;  // max of resident + parked at any instant
};

/**
 * Frequency-based cache manager that tracks metadata only; no payload is
 * stored or moved.
 *
 * LFU keeps one table of resident frequencies and forgets a victim's count on
 * eviction. PLFU additionally parks the victim's count and resumes from it on
 * readmission. PLFUA is PLFU behind an admission gate: objects outside the hot
 * set always miss and never enter either table.
 *
 * Victim choice: minimum frequency, ties broken by the smallest
 * last-access sequence number. Residents are kept in per-frequency buckets
 * ordered by last access, so the victim is the front of the lowest bucket.
 *
 * Not thread-safe; independent instances may run on different threads.
 */
class CacheEngine {
 public:
  explicit CacheEngine(CacheConfig config);

  CacheEngine(const CacheEngine&) = delete;
  CacheEngine& operator=(const CacheEngine&) = delete;
  CacheEngine(CacheEngine&&) noexcept = default;
  CacheEngine& operator=(CacheEngine&&) noexcept = default;

  AccessEvent access(ObjectId object);

  MetadataSize metadata_size() const noexcept {
    return {resident_.size(), parked_.size()};
  }
  const MetadataPeaks& peaks() const noexcept { return peaks_; }

  std::uint64_t request_seq() const noexcept { return request_seq_; }
  std::size_t capacity() const noexcept { return capacity_; }
  Policy policy() const noexcept { return policy_; }

  bool admits(ObjectId object) const;
  std::optional<std::uint64_t> resident_frequency(ObjectId object) const;
  std::optional<std::uint64_t> last_access_seq(ObjectId object) const;
  std::optional<std::uint64_t> parked_frequency(ObjectId object) const;

  // Sorted by object id; for inspection and tests.
  std::vector<std::pair<ObjectId, std::uint64_t>> resident_snapshot() const;
  std::vector<std::pair<ObjectId, std::uint64_t>> parked_snapshot() const;

 private:
  using Bucket = std::list<ObjectId>;
  using BucketMap = std::map<std::uint64_t, Bucket>;

  struct Entry {
    std::uint64_t frequency;
    std::uint64_t last_access_seq;
    BucketMap::iterator bucket;
    Bucket::iterator node;
  };

  ObjectId evict_one();
  void insert(ObjectId object, std::uint64_t frequency, std::uint64_t seq);
  void update_peaks() noexcept;

  std::size_t capacity_;
  Policy policy_;
  std::optional<HotSet> hot_set_;

  std::unordered_map<ObjectId, Entry> resident_;
  std::unordered_map<ObjectId, std::uint64_t> parked_;
  BucketMap buckets_;

  std::uint64_t request_seq_ = 0;
  MetadataPeaks peaks_;
};

}  // namespace plfu
