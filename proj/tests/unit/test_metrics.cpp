#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cocoa/metrics/metrics.hpp"

using namespace cocoa;
using namespace cocoa::metrics;
using sim::milliseconds;
using sim::seconds;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cocoa-metrics-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("utilization is payload bits over the capacity integral") {
  const auto flat = net::RateSchedule::constant(100e6);
  CHECK(utilization(2'615'000'000, flat, seconds(240)) == doctest::Approx(87.1667).epsilon(1e-4));
  CHECK(utilization(0, flat, seconds(240)) == 0.0);
  const net::RateSchedule halving({{SimTime{}, 20e6}, {seconds(30), 10e6}});
  // 20 Mb/s * 30 s + 10 Mb/s * 30 s = 900 Mbit = 112.5 MB.
  CHECK(utilization(112'500'000, halving, seconds(60)) == doctest::Approx(100.0));
  CHECK(utilization(25'000'000, halving, seconds(40), seconds(60)) == doctest::Approx(100.0));
  CHECK_THROWS_AS(utilization(1, flat, SimTime{}), std::invalid_argument);
}

TEST_CASE("mean rtt") {
  const std::vector<RttSample> s = {{SimTime{}, 0, 10}, {SimTime{}, 0, 20}, {SimTime{}, 1, 30}};
  CHECK(mean_rtt(s) == doctest::Approx(20.0));
  const std::vector<RttSample> base(50, RttSample{SimTime{}, 0, 10.6});
  CHECK(mean_rtt(base) == doctest::Approx(10.6));
  CHECK_THROWS_AS(mean_rtt(std::vector<RttSample>{}), std::invalid_argument);
}

TEST_CASE("nearest-rank percentile over a time window") {
  std::vector<RttSample> s;
  for (int i = 1; i <= 100; ++i) s.push_back({milliseconds(i), 0, static_cast<double>(101 - i)});
  CHECK(percentile_rtt(s, 10, SimTime{}, seconds(1)) == 10.0);
  CHECK(percentile_rtt(s, 100, SimTime{}, seconds(1)) == 100.0);
  CHECK(percentile_rtt(s, 50, SimTime{}, seconds(1)) == 50.0);
  // Window [91 ms, 101 ms) holds values 10..1.
  CHECK(percentile_rtt(s, 10, milliseconds(91), milliseconds(101)) == 1.0);
  CHECK_THROWS_AS(percentile_rtt(s, 10, seconds(5), seconds(6)), std::invalid_argument);
}

TEST_CASE("throughput bins are 100 ms and sum to the recorded bytes") {
  ThroughputSeries t(seconds(60));
  CHECK(t.bin_count() == 600);
  t.add_flow(0);
  t.add_flow(1);
  t.record(0, SimTime{}, 1460);
  t.record(0, milliseconds(99), 1460);
  t.record(0, milliseconds(100), 1000);
  t.record(1, seconds(60), 7);  // the end instant folds into the last bin
  CHECK(t.bins().at(0)[0] == 2920);
  CHECK(t.bins().at(0)[1] == 1000);
  CHECK(t.bins().at(1)[599] == 7);
  CHECK(t.total() == 3927);
  CHECK(t.total(0) == 3920);
  CHECK(t.total(5) == 0);
  CHECK(t.bytes_between(milliseconds(100), seconds(60)) == 1007);
}

TEST_CASE("export writes the four files with their headers") {
  const auto dir = scratch("export");
  RunSeries series(seconds(60));
  series.throughput.add_flow(0);
  series.throughput.record(0, milliseconds(150), 1460);
  series.rtt.push_back({milliseconds(12), 0, 10.6});
  series.buffer.push_back({milliseconds(3), 0, 100, 4});
  RunSummary summary;
  summary.utilization_pct = 97.5;
  summary.mean_rtt_ms = 10.6;
  summary.total_delivered = 1460;
  summary.drops.tail = 2;
  summary.drops.cocoa_shrink = 3;
  export_csv(series, summary, dir, {{"scenario", "unit"}});

  const auto tp = lines(dir / "throughput.csv");
  REQUIRE(tp.size() == 601);
  CHECK(tp[0] == "t_s,flow,bytes");
  CHECK(tp[1] == "0.0,0,0");
  CHECK(tp[2] == "0.1,0,1460");
  CHECK(lines(dir / "rtt.csv") == std::vector<std::string>{"t_s,flow,rtt_ms", "0.012000,0,10.600"});
  CHECK(lines(dir / "buffer.csv") ==
        std::vector<std::string>{"t_s,flow,buffer_pkts,occupancy", "0.003000,0,100,4"});
  const auto sum = lines(dir / "summary.txt");
  REQUIRE(sum.size() >= 7);
  CHECK(sum[0] == "utilization_pct = 97.500");
  CHECK(sum[1] == "mean_rtt_ms = 10.600");
  CHECK(sum[2] == "total_mb = 0.001");
  CHECK(sum[3] == "drops_tail = 2");
  CHECK(sum[4] == "drops_codel = 0");
  CHECK(sum[5] == "drops_cocoa = 3");
  CHECK(sum.back() == "scenario = unit");

  // Same inputs, same bytes.
  const auto again = scratch("export-again");
  export_csv(series, summary, again, {{"scenario", "unit"}});
  for (const char* f : {"throughput.csv", "rtt.csv", "buffer.csv", "summary.txt"}) {
    CHECK(slurp(dir / f) == slurp(again / f));
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(again);
}

TEST_CASE("export with no flows writes headers only") {
  const auto dir = scratch("empty");
  export_csv(RunSeries(seconds(1)), RunSummary{}, dir);
  CHECK(lines(dir / "throughput.csv") == std::vector<std::string>{"t_s,flow,bytes"});
  CHECK(lines(dir / "rtt.csv").size() == 1);
  CHECK(lines(dir / "buffer.csv").size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("an unwritable destination names the path") {
  const auto dir = scratch("blocked");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const auto target = dir / "file" / "out";
  try {
    export_csv(RunSeries(seconds(1)), RunSummary{}, target);
    FAIL("expected ExportError");
  } catch (const ExportError& e) {
    CHECK(std::string(e.what()).find(target.string()) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
