#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfverify/chart.hpp"
#include "sfverify/chart_sem.hpp"
#include "sfverify/impl_ir.hpp"
#include "sfverify/retrieve.hpp"

namespace sfv::refine {

struct TraceConfig {
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  std::size_t max_len = 100;
  std::int64_t lo = -10;
  std::int64_t hi = 10;
  /// Traces are checked on this many threads; results do not depend on it.
  unsigned workers = 1;
  /// Shrink the first counterexample before reporting it.
  bool shrink = true;
};

/// Trace number `index` of the suite described by `cfg`. Depends only on
/// the seed and the index.
std::vector<sem::StepInput> generate_trace(const chart::ChartDef& c, const TraceConfig& cfg, std::size_t index);

struct Mismatch {
  /// Number of steps taken before the disagreement was seen (0: initial state).
  std::size_t step = 0;
  std::string what;
};

/// Runs the chart and the program side by side over `trace` and compares
/// the abstracted program state and the outputs after every step.
std::optional<Mismatch> check_trace(const chart::ChartDef& c, const ir::ImplProgram& p,
                                    const retrieve::RetrieveRelation& r, const std::vector<sem::StepInput>& trace);

/// A smaller trace that still fails: shortest failing prefix, then step
/// deletion, then input values moved toward zero and events removed.
std::vector<sem::StepInput> shrink_trace(const chart::ChartDef& c, const ir::ImplProgram& p,
                                         const retrieve::RetrieveRelation& r, std::vector<sem::StepInput> trace);

struct Counterexample {
  std::size_t trace_index = 0;
  std::size_t original_length = 0;
  std::vector<sem::StepInput> trace;
  Mismatch mismatch;
};

struct CosimReport {
  std::size_t traces = 0;
  std::size_t steps = 0;
  std::size_t violations = 0;
  std::optional<Counterexample> counterexample;

  bool clean() const { return violations == 0; }
};

CosimReport cosimulate(const chart::ChartDef& c, const ir::ImplProgram& p, const retrieve::RetrieveRelation& r,
                       const TraceConfig& cfg);

}  // namespace sfv::refine
