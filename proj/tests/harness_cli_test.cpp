#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfverify/cli.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using sfv::testing::kCorpus;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(cli::RunConfig cfg) {
  std::ostringstream out, err;
  const int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig verify_cfg(const std::string& impl) {
  cli::RunConfig cfg;
  cfg.command = "verify";
  cfg.chart = kCorpus + "/charts/AbsoluteValue.sfc";
  cfg.implementation = kCorpus + "/impl/" + impl;
  cfg.trace_count = 100;
  cfg.trace_len_max = 20;
  return cfg;
}

TEST(Validate, CorpusChartIsValid) {
  cli::RunConfig cfg;
  cfg.command = "validate";
  cfg.chart = kCorpus + "/charts/Broadcast.sfc";
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, cfg.chart + ": valid\n");
}

TEST(Validate, MissingFileIsAnIoError) {
  cli::RunConfig cfg;
  cfg.command = "validate";
  cfg.chart = kCorpus + "/charts/NoSuchChart.sfc";
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kIo);
  EXPECT_EQ(r.err, cfg.chart + ": cannot read file\n");
}

TEST(Validate, InvalidChartExitsOne) {
  const auto path = std::filesystem::temp_directory_path() / "sfverify_invalid.sfc";
  std::ofstream(path) << "chart X { state A { } state B { } }\n";
  cli::RunConfig cfg;
  cfg.command = "validate";
  cfg.chart = path.string();
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_FALSE(r.err.empty());
  std::filesystem::remove(path);
}

TEST(Simulate, AbsoluteValueTraceOutputs) {
  cli::RunConfig cfg;
  cfg.command = "simulate";
  cfg.chart = kCorpus + "/charts/AbsoluteValue.sfc";
  cfg.trace = kCorpus + "/traces/AbsoluteValue.trace";
  const auto r = run(cfg);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(r.out);
  std::vector<std::string> ys;
  for (std::string line; std::getline(lines, line);) {
    const auto at = line.find("\"outputs\":{\"y\":");
    ASSERT_NE(at, std::string::npos) << line;
    ys.push_back(line.substr(at + 15, line.find('}', at) - at - 15));
  }
  EXPECT_EQ(ys, (std::vector<std::string>{"0", "5", "3", "3"}));
}

TEST(Generate, EmitsProgramTextAndC) {
  cli::RunConfig cfg;
  cfg.command = "generate";
  cfg.chart = kCorpus + "/charts/AbsoluteValue.sfc";
  auto r = run(cfg);
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, sfv::testing::corpus_file("impl/AbsoluteValue.sfi"));
  cfg.emit_c = true;
  r = run(cfg);
  ASSERT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, sfv::testing::corpus_file("impl/AbsoluteValue_ref.c"));
}

TEST(Retrieve, ReportsProperties) {
  cli::RunConfig cfg;
  cfg.command = "retrieve";
  cfg.chart = kCorpus + "/charts/AbsoluteValue.sfc";
  cfg.implementation = kCorpus + "/impl/AbsoluteValue.c";
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("DWork.is_c1 == IN_P"), std::string::npos);
}

TEST(Verify, PassExitsZero) {
  const auto r = run(verify_cfg("AbsoluteValue.c"));
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Verify, FailExitsOne) {
  auto cfg = verify_cfg("AbsoluteValue_wrongsign.c");
  cfg.report_format = cli::ReportFormat::Json;
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_NE(r.out.find("\"outcome\": \"FAIL\""), std::string::npos) << r.out;
}

TEST(Verify, LoopIsNonconformantWithLocation) {
  const auto r = run(verify_cfg("AbsoluteValue_loop.c"));
  EXPECT_EQ(r.code, cli::kNonconformant);
  const auto all = r.out + r.err;
  EXPECT_NE(all.find("NONCONFORMANT"), std::string::npos) << all;
  EXPECT_NE(all.find("while"), std::string::npos) << all;
  EXPECT_NE(all.find("69:3"), std::string::npos) << all;
}

TEST(Verify, PointerIsNonconformant) {
  const auto r = run(verify_cfg("AbsoluteValue_pointer.c"));
  EXPECT_EQ(r.code, cli::kNonconformant);
  EXPECT_NE((r.out + r.err).find("address-of"), std::string::npos);
}

TEST(Verify, MissingImplementationIsAnIoError) {
  EXPECT_EQ(run(verify_cfg("Nothing.c")).code, cli::kIo);
}

TEST(Verify, UnwritableOutputIsAnIoError) {
  auto cfg = verify_cfg("AbsoluteValue.c");
  cfg.output = "/nonexistent-dir/report.json";
  EXPECT_EQ(run(cfg).code, cli::kIo);
}

TEST(Config, RejectsEmptyDomainAndZeroTraces) {
  auto cfg = verify_cfg("AbsoluteValue.c");
  cfg.domain_lo = 5;
  cfg.domain_hi = 4;
  EXPECT_FALSE(cfg.check().empty());
  EXPECT_EQ(run(cfg).code, cli::kInvalid);
  cfg = verify_cfg("AbsoluteValue.c");
  cfg.trace_count = 0;
  EXPECT_FALSE(cfg.check().empty());
}

TEST(Config, UnknownCommand) {
  cli::RunConfig cfg;
  cfg.command = "frobnicate";
  const auto r = run(cfg);
  EXPECT_EQ(r.code, cli::kInvalid);
  EXPECT_EQ(r.err, "unknown command frobnicate\n");
}

}  // namespace
