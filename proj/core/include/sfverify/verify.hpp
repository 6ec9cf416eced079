#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfverify/cosim.hpp"
#include "sfverify/derive.hpp"
#include "sfverify/match.hpp"

namespace sfv::refine {

enum class Outcome { Pass, Fail, Nonconformant };

std::string to_string(Outcome o);

struct VerifyOptions {
  TraceConfig traces;
  MatchMode mode = MatchMode::Normalized;
  int broadcast_depth = 8;
  /// Skip co-simulation entirely (the verdict then rests on matching alone).
  bool cosimulate = true;
};

struct Verdict {
  Outcome outcome = Outcome::Fail;
  std::string chart;
  std::string implementation;
  /// Pipeline stage that decided a FAIL or NONCONFORMANT outcome.
  std::string phase;
  std::vector<std::string> diagnostics;
  MatchMode mode = MatchMode::Normalized;
  bool matched = false;
  std::map<std::string, std::string> matched_functions;
  std::optional<Divergence> first_divergence;
  std::vector<std::string> reorders;
  std::optional<CosimReport> cosim;
  std::vector<PhaseLogEntry> phase_log;
  /// Rewrites applied while reading C input.
  std::vector<std::string> normalization_log;
  std::string derived_normal;
  std::string impl_normal;
};

/// The whole pipeline. PASS iff the match is total and co-simulation is clean.
Verdict verify(const chart::ChartDef& c, const ir::ImplProgram& p, const VerifyOptions& opt = {});

/// A verdict for an implementation rejected before the pipeline ran.
Verdict nonconformant(const chart::ChartDef& c, const std::string& implementation, const std::string& phase,
                      std::vector<std::string> diagnostics);

/// JSON report, schema "sfverify/1", with a fixed key order.
std::string to_json(const Verdict& v, const VerifyOptions& opt);
std::string render_text(const Verdict& v, const VerifyOptions& opt);

}  // namespace sfv::refine
