#include "plfu/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace plfu {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class Int>
std::optional<Int> parse_int(std::string_view text) {
  const std::string field = trim(text);
  Int value{};
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (field.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

HotSet top_ranks(std::size_t count) {
  HotSet set;
  set.reserve(count);
  for (std::size_t rank = 1; rank <= count; ++rank) set.insert(rank);
  return set;
}

}  // namespace

void validate(const ZipfSpec& spec) {
  if (spec.n_objects < 1) {
    throw Error(ErrorKind::InvalidParameter, "number of objects must be at least 1");
  }
  if (!(spec.alpha > 0.0) || !std::isfinite(spec.alpha)) {
    throw Error(ErrorKind::InvalidParameter, "Zipf exponent must be positive and finite");
  }
  if (spec.n_requests < 1) {
    throw Error(ErrorKind::InvalidParameter, "number of requests must be at least 1");
  }
}

std::vector<double> zipf_pmf(std::size_t n_objects, double alpha) {
  if (n_objects < 1) {
    throw Error(ErrorKind::InvalidParameter, "number of objects must be at least 1");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidParameter, "Zipf exponent must be positive and finite");
  }
  std::vector<double> pmf(n_objects);
  for (std::size_t i = 0; i < n_objects; ++i) {
    pmf[i] = std::pow(static_cast<double>(i + 1), -alpha);
  }
  // smallest terms first
  double norm = 0.0;
  for (auto it = pmf.rbegin(); it != pmf.rend(); ++it) norm += *it;
  for (double& p : pmf) p /= norm;
  return pmf;
}

ZipfSampler::ZipfSampler(std::size_t n_objects, double alpha) {
  const auto pmf = zipf_pmf(n_objects, alpha);
  cdf_.resize(pmf.size());
  double running = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    running += pmf[i];
    cdf_[i] = running;
  }
  cdf_.back() = 1.0;
}

ObjectId ZipfSampler::sample_at(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto index = std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
  return static_cast<ObjectId>(index + 1);
}

Trace generate(const ZipfSpec& spec) {
  validate(spec);
  const ZipfSampler sampler(spec.n_objects, spec.alpha);
  TraceRng rng(spec.seed);
  Trace trace;
  trace.provenance = spec;
  trace.requests.resize(spec.n_requests);
  for (auto& id : trace.requests) id = sampler(rng);
  return trace;
}

Trace ingest_sessions(std::span<const SessionRecord> records, std::int64_t min_duration,
                      std::optional<TimeWindow> window, std::string source) {
  std::vector<SessionRecord> kept;
  for (const auto& record : records) {
    if (record.end < record.start) {
      throw Error(ErrorKind::MalformedRecord,
                  "session for content " + std::to_string(record.content) +
                      " ends before it starts");
    }
    if (record.end - record.start < min_duration) continue;
    if (window && (record.start < window->start || record.start >= window->end)) continue;
    kept.push_back(record);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.content < b.content;
  });

  Trace trace;
  trace.provenance = IngestedSource{std::move(source)};
  trace.requests.reserve(kept.size());
  for (const auto& record : kept) trace.requests.push_back(record.content);
  return trace;
}

std::vector<SessionRecord> read_sessions_csv(std::istream& in) {
  std::vector<SessionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || trim(fields[0]) != "start" || trim(fields[1]) != "end" ||
          trim(fields[2]) != "content_id") {
        throw Error(ErrorKind::MalformedRecord,
                    "line " + std::to_string(line_no) +
                        ": expected header 'start,end,content_id'");
      }
      continue;
    }
    const auto fail = [&](const std::string& why) {
      return Error(ErrorKind::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 3) throw fail("expected 3 fields, got " + std::to_string(fields.size()));
    const auto start = parse_int<std::int64_t>(fields[0]);
    const auto end = parse_int<std::int64_t>(fields[1]);
    const auto content = parse_int<ObjectId>(fields[2]);
    if (!start || !end || !content) throw fail("missing or non-integer field");
    if (*end < *start) throw fail("session end precedes start");
    records.push_back({*start, *end, *content});
  }
  if (!header_seen) {
    throw Error(ErrorKind::MalformedRecord, "line 1: expected header 'start,end,content_id'");
  }
  return records;
}

std::vector<SessionRecord> read_sessions_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open session file '" + path + "'");
  try {
    return read_sessions_csv(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

Trace read_trace(std::istream& in, std::string source) {
  Trace trace;
  trace.provenance = IngestedSource{source};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string field = trim(line);
    if (field.empty()) continue;
    const auto id = parse_int<ObjectId>(field);
    if (!id) {
      throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line_no) +
                                             ": expected a non-negative integer id, got '" +
                                             field + "'");
    }
    trace.requests.push_back(*id);
  }
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open trace file '" + path + "'");
  return read_trace(in, path);
}

void write_trace(std::ostream& out, const Trace& trace) {
  std::string buffer;
  buffer.reserve(trace.requests.size() * 6);
  char digits[24];
  for (ObjectId id : trace.requests) {
    auto [ptr, ec] = std::to_chars(digits, digits + sizeof digits, id);
    buffer.append(digits, ptr);
    buffer.push_back('\n');
  }
  out << buffer;
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write trace file '" + path + "'");
  write_trace(out, trace);
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

HotSet read_hot_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open hot-set file '" + path + "'");
  const Trace ids = read_trace(in, path);
  return HotSet(ids.requests.begin(), ids.requests.end());
}

std::size_t distinct_objects(std::span<const ObjectId> requests) {
  std::unordered_set<ObjectId> seen(requests.begin(), requests.end());
  return seen.size();
}

std::vector<std::pair<ObjectId, std::uint64_t>> frequency_ranking(
    std::span<const ObjectId> requests) {
  std::unordered_map<ObjectId, std::uint64_t> counts;
  for (ObjectId id : requests) ++counts[id];
  std::vector<std::pair<ObjectId, std::uint64_t>> ranking(counts.begin(), counts.end());
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return ranking;
}

HotSet hot_set_for_zipf(std::size_t n_objects, std::size_t capacity) {
  if (2 * capacity > n_objects) {
    throw Error(ErrorKind::InsufficientObjects,
                "hot set needs " + std::to_string(2 * capacity) + " objects but only " +
                    std::to_string(n_objects) + " exist");
  }
  return top_ranks(2 * capacity);
}

HotSet hot_set(const Trace& trace, std::size_t capacity) {
  if (const auto* spec = std::get_if<ZipfSpec>(&trace.provenance)) {
    return hot_set_for_zipf(spec->n_objects, capacity);
  }
  const auto ranking = frequency_ranking(trace.requests);
  const std::size_t want = 2 * capacity;
  if (want > ranking.size()) {
    throw Error(ErrorKind::InsufficientObjects,
                "hot set needs " + std::to_string(want) + " objects but the trace has only " +
                    std::to_string(ranking.size()) + " distinct ids");
  }
  HotSet set;
  set.reserve(want);
  for (std::size_t i = 0; i < want; ++i) set.insert(ranking[i].first);
  return set;
}

}  // namespace plfu
