#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "plfu/cli.hpp"
#include "plfu/metrics.hpp"
#include "plfu/workload.hpp"

namespace fs = std::filesystem;
using namespace plfu;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("plfu_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return plfu::cli::run(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, GenerateWritesDeterministicTrace) {
  ASSERT_EQ(cli({"generate", "--n", "100", "--alpha", "1.1", "--requests", "100000", "--seed", "7",
                 "--out", path("a.txt")}),
            0)
      << err_.str();
  ASSERT_EQ(cli({"generate", "--n", "100", "--alpha", "1.1", "--requests", "100000", "--seed", "7",
                 "--out", path("b.txt")}),
            0);
  const auto a = slurp(path("a.txt"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 100000);
  EXPECT_EQ(a, slurp(path("b.txt")));
  EXPECT_NE(out_.str().find("100000 requests"), std::string::npos);
}

TEST_F(CliTest, GenerateRejectsZeroObjects) {
  EXPECT_NE(cli({"generate", "--n", "0", "--out", path("x.txt")}), 0);
  EXPECT_NE(err_.str().find("invalid-parameter"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("x.txt")));
}

TEST_F(CliTest, RunLfuHandTrace) {
  write("hand.txt", "1\n2\n1\n3\n1\n2\n");
  ASSERT_EQ(cli({"run", "--trace", path("hand.txt"), "--policy", "lfu", "--capacity", "2",
                 "--report", path("r.json"), "--events", path("e.csv")}),
            0)
      << err_.str();
  const auto report = report_from_json(slurp(path("r.json")));
  EXPECT_NEAR(report.chr, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(report.hits, 2u);
  const auto events = slurp(path("e.csv"));
  EXPECT_EQ(std::count(events.begin(), events.end(), '\n'), 7);
}

TEST_F(CliTest, RunPrintsReportToStdoutByDefault) {
  write("hand.txt", "1\n2\n1\n");
  ASSERT_EQ(cli({"run", "--trace", path("hand.txt"), "--policy", "plfu", "--capacity", "1"}), 0);
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j.at("final_parked"), 1);
}

TEST_F(CliTest, RateUsesDistinctObjectCount) {
  std::string body;
  for (int id = 1; id <= 212; ++id) body += std::to_string(id) + "\n";
  write("t212.txt", body);
  ASSERT_EQ(cli({"run", "--trace", path("t212.txt"), "--policy", "lfu", "--rate", "0.25",
                 "--report", path("r.json")}),
            0);
  EXPECT_NE(out_.str().find("capacity 53"), std::string::npos) << out_.str();
  EXPECT_EQ(report_from_json(slurp(path("r.json"))).final_resident, 53u);
}

TEST_F(CliTest, PlfuaInsufficientObjects) {
  write("small.txt", "1\n2\n3\n1\n");
  EXPECT_NE(cli({"run", "--trace", path("small.txt"), "--policy", "plfua", "--capacity", "2"}), 0);
  EXPECT_NE(err_.str().find("insufficient-objects"), std::string::npos) << err_.str();
}

TEST_F(CliTest, PlfuaHotsetFile) {
  write("t.txt", "1\n9\n1\n9\n1\n");
  write("hot.txt", "1\n2\n");
  ASSERT_EQ(cli({"run", "--trace", path("t.txt"), "--policy", "plfua", "--capacity", "1",
                 "--hotset-file", path("hot.txt")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j.at("hits"), 2);
  EXPECT_EQ(j.at("misses"), 3);
}

TEST_F(CliTest, SizeFlagsAreExclusiveAndRequired) {
  write("t.txt", "1\n2\n");
  EXPECT_NE(cli({"run", "--trace", path("t.txt"), "--policy", "lfu"}), 0);
  EXPECT_NE(cli({"run", "--trace", path("t.txt"), "--policy", "lfu", "--rate", "0.5",
                 "--capacity", "1"}),
            0);
  EXPECT_NE(cli({"run", "--trace", path("t.txt"), "--policy", "lru", "--capacity", "1"}), 0);
}

TEST_F(CliTest, MissingAndMalformedTrace) {
  EXPECT_NE(cli({"run", "--trace", path("nope.txt"), "--policy", "lfu", "--capacity", "1"}), 0);
  EXPECT_NE(err_.str().find("io-error"), std::string::npos);
  write("bad.txt", "1\n2\nx\n");
  EXPECT_NE(cli({"run", "--trace", path("bad.txt"), "--policy", "lfu", "--capacity", "1"}), 0);
  EXPECT_NE(err_.str().find(":3:"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ScatterFirstPointPerRankIsMiss) {
  ASSERT_EQ(cli({"generate", "--n", "212", "--requests", "20000", "--seed", "3", "--out",
                 path("t.txt")}),
            0);
  ASSERT_EQ(cli({"scatter", "--trace", path("t.txt"), "--policy", "lfu", "--capacity", "50",
                 "--out", path("s.csv")}),
            0)
      << err_.str();
  std::istringstream in(slurp(path("s.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "rank,occurrence_index,outcome");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",1,") != std::string::npos) EXPECT_EQ(line.substr(line.rfind(',') + 1), "miss");
  }
  EXPECT_EQ(rows, 20000u);
}

TEST_F(CliTest, ScatterEmptyTraceWritesHeaderOnly) {
  write("empty.txt", "");
  ASSERT_EQ(cli({"scatter", "--trace", path("empty.txt"), "--policy", "plfu", "--rate", "0.1",
                 "--out", path("s.csv")}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(path("s.csv")), "rank,occurrence_index,outcome\n");
}

TEST_F(CliTest, IngestSessions) {
  write("s.csv", "start,end,content_id\n100,220,7\n50,109,8\n10,3610,9\n");
  ASSERT_EQ(cli({"ingest", "--sessions", path("s.csv"), "--out", path("t.txt")}), 0) << err_.str();
  EXPECT_EQ(slurp(path("t.txt")), "9\n7\n");
  ASSERT_EQ(cli({"ingest", "--sessions", path("s.csv"), "--window-start", "50", "--window-end",
                 "200", "--min-duration", "0", "--out", path("w.txt")}),
            0);
  EXPECT_EQ(slurp(path("w.txt")), "8\n7\n");
  write("bad.csv", "start,end,content_id\n100,50,7\n");
  EXPECT_NE(cli({"ingest", "--sessions", path("bad.csv"), "--out", path("t.txt")}), 0);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ReducedSweepEmitsWellFormedCsvs) {
  ASSERT_EQ(cli({"sweep", "--outdir", path("grid"), "--max-n", "215", "--samples", "2",
                 "--requests", "3000", "--policies", "lfu,plfu,plfua"}),
            0)
      << err_.str();
  for (const char* policy : {"lfu", "plfu", "plfua"}) {
    for (const char* metric : {"mean_chr", "mean_cpu_seconds", "mean_peak_metadata"}) {
      for (const char* suffix : {".csv", ".stddev.csv"}) {
        const auto file = path("grid/" + std::string(policy) + "_" + metric + suffix);
        ASSERT_TRUE(fs::exists(file)) << file;
        std::istringstream in(slurp(file));
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line)) {
          EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
          ++rows;
        }
        EXPECT_EQ(rows, 3u);
      }
    }
  }
  const auto manifest = nlohmann::json::parse(slurp(path("grid/manifest.json")));
  EXPECT_EQ(manifest.at("config").at("object_counts").size(), 2u);
}

TEST_F(CliTest, SweepConfigFile) {
  write("cfg.json",
        R"({"object_counts":[100],"rates":[0.1,0.2],"policies":["lfu"],"samples_per_case":1,"requests_per_sample":1000})");
  ASSERT_EQ(cli({"sweep", "--config", path("cfg.json"), "--outdir", path("g")}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(path("g/lfu_mean_chr.csv")));
  EXPECT_FALSE(fs::exists(path("g/plfu_mean_chr.csv")));
  write("broken.json", R"({"rates":[0.5, 0.1]})");
  EXPECT_NE(cli({"sweep", "--config", path("broken.json"), "--outdir", path("g2")}), 0);
  EXPECT_NE(err_.str().find("invalid-config"), std::string::npos) << err_.str();
}

TEST_F(CliTest, UnknownSubcommandFails) {
  EXPECT_NE(cli({"frobnicate"}), 0);
  EXPECT_NE(cli({}), 0);
}
