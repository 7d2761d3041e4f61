#include "plfu/cache_engine.hpp"

#include <algorithm>
#include <iterator>

namespace plfu {

void validate(const CacheConfig& config) {
  if (config.capacity == 0) {
    throw Error(ErrorKind::InvalidConfig, "cache capacity must be at least 1");
  }
  if (config.policy == Policy::PLFUA) {
    if (!config.hot_set || config.hot_set->empty()) {
      throw Error(ErrorKind::InvalidConfig, "PLFUA requires a non-empty hot set");
    }
  } else if (config.hot_set) {
    throw Error(ErrorKind::InvalidConfig,
                "a hot set is only meaningful for the PLFUA policy");
  }
}

CacheEngine::CacheEngine(CacheConfig config)
    : capacity_(config.capacity), policy_(config.policy) {
  validate(config);
  hot_set_ = std::move(config.hot_set);
  resident_.reserve(capacity_ + 1);
  if (hot_set_) parked_.reserve(hot_set_->size());
}

bool CacheEngine::admits(ObjectId object) const {
  return !hot_set_ || hot_set_->contains(object);
}

AccessEvent CacheEngine::access(ObjectId object) {
  const std::uint64_t seq = request_seq_++;

  if (auto it = resident_.find(object); it != resident_.end()) {
    Entry& entry = it->second;
    const std::uint64_t next_freq = entry.frequency + 1;
    auto from = entry.bucket;
    auto to = std::next(from);
    if (to == buckets_.end() || to->first != next_freq) {
      to = buckets_.emplace_hint(to, next_freq, Bucket{});
    }
    to->second.splice(to->second.end(), from->second, entry.node);
    if (from->second.empty()) buckets_.erase(from);
    entry.frequency = next_freq;
    entry.last_access_seq = seq;
    entry.bucket = to;
    return {seq, object, Outcome::Hit, std::nullopt};
  }

  if (policy_ == Policy::PLFUA && !hot_set_->contains(object)) {
    return {seq, object, Outcome::Miss, std::nullopt};
  }

  std::optional<ObjectId> evicted;
  if (resident_.size() >= capacity_) evicted = evict_one();

  std::uint64_t frequency = 1;
  if (policy_ != Policy::LFU) {
    if (auto parked = parked_.find(object); parked != parked_.end()) {
      frequency = parked->second + 1;
      parked_.erase(parked);
    }
  }
  insert(object, frequency, seq);
  update_peaks();
  return {seq, object, Outcome::Miss, evicted};
}

ObjectId CacheEngine::evict_one() {
  auto lowest = buckets_.begin();
  const ObjectId victim = lowest->second.front();
  lowest->second.pop_front();
  if (lowest->second.empty()) buckets_.erase(lowest);

  auto it = resident_.find(victim);
  const std::uint64_t frequency = it->second.frequency;
  resident_.erase(it);
  if (policy_ != Policy::LFU) parked_.emplace(victim, frequency);
  return victim;
}

void CacheEngine::insert(ObjectId object, std::uint64_t frequency, std::uint64_t seq) {
  auto bucket = buckets_.try_emplace(frequency).first;
  bucket->second.push_back(object);
  resident_.emplace(object, Entry{frequency, seq, bucket, std::prev(bucket->second.end())});
}

void CacheEngine::update_peaks() noexcept {
  peaks_.resident = std::max(peaks_.resident, resident_.size());
  peaks_.parked = std::max(peaks_.parked, parked_.size());
  peaks_.total = std::max(peaks_.total, resident_.size() + parked_.size());
}

std::optional<std::uint64_t> CacheEngine::resident_frequency(ObjectId object) const {
  if (auto it = resident_.find(object); it != resident_.end()) return it->second.frequency;
  return std::nullopt;
}

std::optional<std::uint64_t> CacheEngine::last_access_seq(ObjectId object) const {
  if (auto it = resident_.find(object); it != resident_.end()) {
    return it->second.last_access_seq;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> CacheEngine::parked_frequency(ObjectId object) const {
  if (auto it = parked_.find(object); it != parked_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::pair<ObjectId, std::uint64_t>> CacheEngine::resident_snapshot() const {
  std::vector<std::pair<ObjectId, std::uint64_t>> out;
  out.reserve(resident_.size());
  for (const auto& [id, entry] : resident_) out.emplace_back(id, entry.frequency);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<ObjectId, std::uint64_t>> CacheEngine::parked_snapshot() const {
  std::vector<std::pair<ObjectId, std::uint64_t>> out(parked_.begin(), parked_.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace plfu
