#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/chart.hpp"

namespace sfv::sem {

using chart::ChartDef;
using chart::StateId;

/// Dynamic chart state. `state_status` has an entry for the chart itself
/// and for every state; `vars` for every declared variable.
struct ChartDynState {
  std::map<std::string, bool> state_status;
  std::map<StateId, StateId> state_history;
  std::map<std::string, Value> vars;

  bool active(const std::string& id) const;
  bool operator==(const ChartDynState& o) const;
  bool operator!=(const ChartDynState& o) const { return !(*this == o); }
};

struct StepInput {
  std::vector<std::string> active_events;
  std::map<std::string, Value> inputs;
};

enum class TraceKind { Entered, Exited, Action, TransitionTaken, BroadcastBegin, BroadcastEnd, EarlyReturn };

struct TraceEvent {
  TraceKind kind;
  std::string subject;
  std::string detail;

  std::string str() const;
  bool operator==(const TraceEvent& o) const {
    return kind == o.kind && subject == o.subject && detail == o.detail;
  }
};

struct StepResult {
  ChartDynState state;
  std::map<std::string, Value> outputs;
  std::vector<TraceEvent> trace;
};

struct SemOptions {
  int broadcast_depth_limit = 64;
  /// Re-check the ChartDynState invariants after every step.
  bool check_invariants = false;
  bool record_trace = true;
};

/// Runtime failure of the interpreter: junction cycle, broadcast
/// divergence, malformed input, or (in checking mode) a broken invariant.
class SemError : public std::runtime_error {
 public:
  enum class Kind { JunctionCycle, BroadcastDivergence, BadInput, Invariant };
  SemError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

ChartDynState init_state(const ChartDef& c);

/// One discrete-time step: executes the chart once per active event in
/// declaration order, or once without an event.
StepResult step(const ChartDef& c, const ChartDynState& s, const StepInput& in, const SemOptions& opt = {});

struct PathOutcome {
  bool completed = false;
  StateId target;
  std::vector<std::string> path;  // transition ids from origin to target
};

/// Depth-first search for a completed transition path leaving `origin`
/// (a state's outer transitions, or a junction). Condition actions along
/// the way are applied to `s` and not undone on backtracking.
PathOutcome resolve_path(const ChartDef& c, ChartDynState& s, const std::string& origin,
                         const std::optional<std::string>& event, const SemOptions& opt = {});

struct BroadcastOutcome {
  ChartDynState state;
  bool early_return = false;
  std::vector<TraceEvent> trace;
};

/// Executes the whole chart with local event `ev` active, then reports
/// whether `context` (a state, or the chart) was left inactive.
BroadcastOutcome broadcast(const ChartDef& c, const ChartDynState& s, const std::string& ev,
                           const std::string& context, const SemOptions& opt = {});

/// Folds `step` over `trace` from the initial state. Errors are rethrown
/// with the failing step index prefixed.
std::vector<StepResult> run_trace(const ChartDef& c, const std::vector<StepInput>& trace, const SemOptions& opt = {});

/// Violated ChartDynState invariants, empty when consistent.
std::vector<std::string> check_invariants(const ChartDef& c, const ChartDynState& s);

}  // namespace sfv::sem
