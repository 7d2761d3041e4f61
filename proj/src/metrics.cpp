#include "plfu/metrics.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"

namespace plfu {

RunReport summarize(std::span<const AccessEvent> events, const MetadataPeaks& peaks,
                    const MetadataSize& final_size) {
  if (events.empty()) throw Error(ErrorKind::EmptyEvents, "cannot summarize an empty run");
  RunReport report;
  for (const auto& event : events) {
    if (event.outcome == Outcome::Hit) {
      ++report.hits;
    } else {
      ++report.misses;
    }
  }
  report.chr = static_cast<double>(report.hits) / static_cast<double>(events.size());
  report.peak_resident = peaks.resident;
  report.peak_parked = peaks.parked;
  report.final_resident = final_size.resident_count;
  report.final_parked = final_size.parked_count;
  return report;
}

RunReport summarize(std::span<const AccessEvent> events, const CacheEngine& engine) {
  return summarize(events, engine.peaks(), engine.metadata_size());
}

RunReport make_report(std::uint64_t hits, std::uint64_t misses, const CacheEngine& engine) {
  RunReport report;
  report.hits = hits;
  report.misses = misses;
  const auto total = hits + misses;
  report.chr = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  report.peak_resident = engine.peaks().resident;
  report.peak_parked = engine.peaks().parked;
  report.final_resident = engine.metadata_size().resident_count;
  report.final_parked = engine.metadata_size().parked_count;
  return report;
}

std::string to_json(const RunReport& report, int indent) {
  nlohmann::ordered_json j;
  j["hits"] = report.hits;
  j["misses"] = report.misses;
  j["chr"] = report.chr;
  j["peak_resident"] = report.peak_resident;
  j["peak_parked"] = report.peak_parked;
  j["final_resident"] = report.final_resident;
  j["final_parked"] = report.final_parked;
  return j.dump(indent);
}

RunReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunReport report;
    report.hits = j.at("hits").get<std::uint64_t>();
    report.misses = j.at("misses").get<std::uint64_t>();
    report.chr = j.at("chr").get<double>();
    report.peak_resident = j.at("peak_resident").get<std::uint64_t>();
    report.peak_parked = j.at("peak_parked").get<std::uint64_t>();
    report.final_resident = j.at("final_resident").get<std::uint64_t>();
    report.final_parked = j.at("final_parked").get<std::uint64_t>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad run report: ") + e.what());
  }
}

RankMap popularity_ranks(const Trace& trace) {
  RankMap ranks;
  if (const auto* spec = std::get_if<ZipfSpec>(&trace.provenance)) {
    ranks.reserve(spec->n_objects);
    for (ObjectId id = 1; id <= spec->n_objects; ++id) ranks.emplace(id, id);
    return ranks;
  }
  const auto ranking = frequency_ranking(trace.requests);
  ranks.reserve(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) ranks.emplace(ranking[i].first, i + 1);
  return ranks;
}

std::vector<ScatterPoint> scatter(std::span<const AccessEvent> events, const RankMap& ranks) {
  std::unordered_map<ObjectId, std::uint64_t> seen;
  std::vector<ScatterPoint> points;
  points.reserve(events.size());
  for (const auto& event : events) {
    const auto rank = ranks.find(event.object);
    if (rank == ranks.end()) {
      throw Error(ErrorKind::UnknownObject,
                  "object " + std::to_string(event.object) + " has no popularity rank");
    }
    points.push_back({rank->second, ++seen[event.object], event.outcome});
  }
  std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.occurrence_index < b.occurrence_index;
  });
  return points;
}

std::unordered_map<ObjectId, ObjectOutcomes> per_object_outcomes(
    std::span<const AccessEvent> events) {
  std::unordered_map<ObjectId, ObjectOutcomes> out;
  for (const auto& event : events) {
    auto& o = out[event.object];
    if (event.outcome == Outcome::Hit) {
      ++o.hits;
    } else {
      ++o.misses;
    }
  }
  return out;
}

std::size_t starved_objects(std::span<const AccessEvent> events, const RankMap& ranks,
                            std::uint64_t max_rank, double threshold) {
  std::size_t count = 0;
  for (const auto& [id, outcomes] : per_object_outcomes(events)) {
    const auto rank = ranks.find(id);
    if (rank == ranks.end()) {
      throw Error(ErrorKind::UnknownObject,
                  "object " + std::to_string(id) + " has no popularity rank");
    }
    if (rank->second <= max_rank && outcomes.miss_ratio() > threshold) ++count;
  }
  return count;
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterPoint> points) {
  out << "rank,occurrence_index,outcome\n";
  for (const auto& p : points) {
    out << p.rank << ',' << p.occurrence_index << ',' << to_string(p.outcome) << '\n';
  }
}

void write_events_csv(std::ostream& out, std::span<const AccessEvent> events) {
  out << "seq,object,outcome,evicted\n";
  for (const auto& e : events) {
    out << e.seq << ',' << e.object << ',' << to_string(e.outcome) << ',';
    if (e.evicted) out << *e.evicted;
    out << '\n';
  }
}

}  // namespace plfu
