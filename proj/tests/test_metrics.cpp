#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "plfu/bench.hpp"
#include "plfu/metrics.hpp"

using namespace plfu;

namespace {

constexpr ObjectId A = 1, B = 2, C = 3;

Replay lfu_hand_trace() {
  return replay({2, Policy::LFU, std::nullopt}, std::vector<ObjectId>{A, B, A, C, A, B});
}

}  // namespace

TEST(Summarize, LfuHandTrace) {
  const auto run = lfu_hand_trace();
  const auto report = summarize(run.events, run.peaks, {2, 0});
  EXPECT_EQ(report.hits, 2u);
  EXPECT_EQ(report.misses, 4u);
  EXPECT_DOUBLE_EQ(report.chr, 1.0 / 3.0);
  EXPECT_EQ(report.peak_resident, 2u);
  EXPECT_EQ(report.final_parked, 0u);
  EXPECT_EQ(report, run.report);
}

TEST(Summarize, AllHits) {
  std::vector<AccessEvent> events;
  for (std::uint64_t i = 0; i < 4; ++i) events.push_back({i, A, Outcome::Hit, std::nullopt});
  EXPECT_DOUBLE_EQ(summarize(events, {}, {}).chr, 1.0);
}

TEST(Summarize, EmptyEventsRejected) {
  try {
    summarize({}, MetadataPeaks{}, MetadataSize{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyEvents);
  }
}

TEST(Summarize, CountsAddUpOnGeneratedTraces) {
  for (Policy p : {Policy::LFU, Policy::PLFU}) {
    const auto trace = generate({300, 1.1, 5000, 4});
    const auto run = replay({20, p, std::nullopt}, trace.requests);
    const auto report = summarize(run.events, run.peaks, {run.report.final_resident, run.report.final_parked});
    EXPECT_EQ(report.hits + report.misses, trace.size());
    EXPECT_DOUBLE_EQ(report.chr, static_cast<double>(report.hits) / trace.size());
  }
}

TEST(ReportJson, KeysMatchFieldNames) {
  const auto run = lfu_hand_trace();
  const auto j = nlohmann::json::parse(to_json(run.report));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"chr", "final_parked", "final_resident", "hits",
                                            "misses", "peak_parked", "peak_resident"}));
  EXPECT_EQ(report_from_json(to_json(run.report)), run.report);
}

TEST(Scatter, RepeatedObject) {
  const auto run = replay({1, Policy::LFU, std::nullopt}, std::vector<ObjectId>{A, A});
  const RankMap ranks{{A, 4}};
  EXPECT_EQ(scatter(run.events, ranks),
            (std::vector<ScatterPoint>{{4, 1, Outcome::Miss}, {4, 2, Outcome::Hit}}));
}

TEST(Scatter, LfuHandTraceGroupsByRank) {
  const auto run = lfu_hand_trace();
  const RankMap ranks{{A, 1}, {B, 2}, {C, 3}};
  const auto M = Outcome::Miss, H = Outcome::Hit;
  EXPECT_EQ(scatter(run.events, ranks), (std::vector<ScatterPoint>{{1, 1, M},
                                                                    {1, 2, H},
                                                                    {1, 3, H},
                                                                    {2, 1, M},
                                                                    {2, 2, M},
                                                                    {3, 1, M}}));
}

TEST(Scatter, UnknownObjectRejected) {
  const auto run = lfu_hand_trace();
  try {
    scatter(run.events, RankMap{{A, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownObject);
  }
}

TEST(Scatter, OnePointPerEventAndFirstPointIsMiss) {
  for (Policy p : {Policy::LFU, Policy::PLFU}) {
    const auto trace = generate({212, 1.1, 20000, 9});
    const auto run = replay({50, p, std::nullopt}, trace.requests);
    const auto points = scatter(run.events, popularity_ranks(trace));
    ASSERT_EQ(points.size(), run.events.size());
    std::uint64_t prev_rank = 0, prev_index = 0;
    for (const auto& pt : points) {
      if (pt.rank != prev_rank) {
        ASSERT_GT(pt.rank, prev_rank);
        ASSERT_EQ(pt.occurrence_index, 1u);
        ASSERT_EQ(pt.outcome, Outcome::Miss);
      } else {
        ASSERT_EQ(pt.occurrence_index, prev_index + 1);
      }
      prev_rank = pt.rank;
      prev_index = pt.occurrence_index;
    }
  }
}

TEST(PopularityRanks, SyntheticRankIsId) {
  const auto trace = generate({30, 1.1, 10, 1});
  const auto ranks = popularity_ranks(trace);
  EXPECT_EQ(ranks.size(), 30u);
  EXPECT_EQ(ranks.at(17), 17u);
}

TEST(PopularityRanks, IngestedByCountThenId) {
  Trace trace;
  trace.requests = {5, 9, 9, 2, 5, 7};
  const auto ranks = popularity_ranks(trace);
  EXPECT_EQ(ranks.at(5), 1u);
  EXPECT_EQ(ranks.at(9), 2u);
  EXPECT_EQ(ranks.at(2), 3u);
  EXPECT_EQ(ranks.at(7), 4u);
}

TEST(Starvation, CountsHighMissRatioObjectsUpToRank) {
  // A: 1 miss 9 hits, B: 10 misses, C: 10 misses
  std::vector<AccessEvent> events;
  std::uint64_t seq = 0;
  events.push_back({seq++, A, Outcome::Miss, std::nullopt});
  for (int i = 0; i < 9; ++i) events.push_back({seq++, A, Outcome::Hit, std::nullopt});
  for (int i = 0; i < 10; ++i) events.push_back({seq++, B, Outcome::Miss, std::nullopt});
  for (int i = 0; i < 10; ++i) events.push_back({seq++, C, Outcome::Miss, std::nullopt});
  const RankMap ranks{{A, 1}, {B, 2}, {C, 3}};
  EXPECT_EQ(starved_objects(events, ranks, 2), 1u);
  EXPECT_EQ(starved_objects(events, ranks, 3), 2u);
  EXPECT_EQ(starved_objects(events, ranks, 3, 1.0), 0u);
}

TEST(CsvWriters, Headers) {
  const auto run = lfu_hand_trace();
  std::ostringstream scatter_out, events_out;
  write_scatter_csv(scatter_out, scatter(run.events, RankMap{{A, 1}, {B, 2}, {C, 3}}));
  write_events_csv(events_out, run.events);
  EXPECT_EQ(scatter_out.str().substr(0, 32), "rank,occurrence_index,outcome\n1,");
  EXPECT_NE(scatter_out.str().find("1,2,hit\n"), std::string::npos);
  EXPECT_NE(events_out.str().find("3,3,miss,2\n"), std::string::npos);
  EXPECT_NE(events_out.str().find("2,1,hit,\n"), std::string::npos);
}
