#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sfverify/match.hpp"

namespace sfv::cli {

/// Process exit statuses. No other values are returned.
enum Exit : int { kOk = 0, kInvalid = 1, kIo = 2, kNonconformant = 3 };

enum class ReportFormat { Text, Json };

struct RunConfig {
  std::string command;
  std::string chart;
  std::string implementation;  // .sfi program text, or C when it ends in .c/.h
  std::string trace;
  std::string output;          // empty: standard output
  std::uint64_t seed = 0;
  std::size_t trace_count = 1000;
  std::size_t trace_len_max = 100;
  std::int64_t domain_lo = -10;
  std::int64_t domain_hi = 10;
  int broadcast_depth_limit = 8;
  refine::MatchMode match_mode = refine::MatchMode::Normalized;
  ReportFormat report_format = ReportFormat::Text;
  unsigned workers = 1;
  bool emit_c = false;  // generate: C rendering instead of program text
  bool cosimulate = true;

  /// Empty when usable, otherwise what is wrong.
  std::string check() const;
};

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_retrieve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on `cfg.command`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Whole file contents, or nullopt when it cannot be read.
std::optional<std::string> read_file(const std::string& path);

}  // namespace sfv::cli
