#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"
#include "sfverify/diagnostics.hpp"
#include "sfverify/value.hpp"

namespace sfv::chart {

using StateId = std::string;

enum class Decomposition { Sequential, Parallel };
enum class EventKind { Input, Local };
enum class DataKind { Input, Output, Local };

struct EventDecl {
  std::string name;
  EventKind kind = EventKind::Input;
  SourceLoc loc;
};

struct DataDecl {
  std::string name;
  DataKind kind = DataKind::Local;
  Sort sort = Sort::Int;
  SourceLoc loc;
};

struct OnAction {
  std::string event;
  StmtPtr action;
};

struct StateDef {
  StateId id;
  StateId parent;  // the chart identifier for top-level states
  Decomposition decomposition = Decomposition::Sequential;
  std::vector<StateId> child_order;
  StmtPtr entry;
  StmtPtr during;
  StmtPtr exit;
  std::vector<OnAction> on_actions;
  bool has_history = false;
  SourceLoc loc;
};

struct TransitionDef {
  std::string id;
  std::string scope;               // state (or chart) whose body declares it
  std::optional<std::string> source;  // nullopt: default transition
  std::string target;
  std::optional<std::string> trigger;
  ExprPtr condition;               // null: always true
  StmtPtr condition_action;
  StmtPtr transition_action;
  int order = 1;
  SourceLoc loc;

  bool is_default() const { return !source.has_value(); }
};

struct JunctionDef {
  std::string id;
  StateId parent;
  SourceLoc loc;
};

/// Static chart structure. Immutable once built; safe to share.
struct ChartDef {
  std::string identifier;
  Decomposition decomposition = Decomposition::Sequential;
  std::vector<StateId> child_order;  // top-level states in declaration order
  std::map<StateId, StateDef> states;
  std::map<std::string, TransitionDef> transitions;
  std::map<std::string, JunctionDef> junctions;
  std::vector<EventDecl> events;
  std::vector<DataDecl> data;
  /// Declaration order of transitions, for stable printing.
  std::vector<std::string> transition_order;
  std::vector<std::string> junction_order;

  bool is_chart(const std::string& id) const { return id == identifier; }
  bool is_state(const std::string& id) const { return states.count(id) != 0; }
  bool is_junction(const std::string& id) const { return junctions.count(id) != 0; }

  const StateDef& state(const StateId& id) const;
  const DataDecl* find_data(const std::string& name) const;
  const EventDecl* find_event(const std::string& name) const;
  /// 1-based position of the event in declaration order; 0 if undeclared.
  int event_index(const std::string& name) const;

  /// Children of a state or of the chart.
  const std::vector<StateId>& children(const std::string& scope) const;
  Decomposition decomposition_of(const std::string& scope) const;
  /// Parent of a state; the chart identifier for top-level states.
  std::string parent_of(const StateId& id) const;
  /// True if `desc` equals `anc` or lies below it. The chart is the root.
  bool is_descendant_or_self(const std::string& desc, const std::string& anc) const;
  /// States from just below `scope` down to `target`, top-down.
  std::vector<StateId> chain_below(const std::string& scope, const StateId& target) const;

  /// Transitions leaving `source` declared in `scope`, by ascending order.
  std::vector<const TransitionDef*> outgoing(const std::string& source, const std::string& scope) const;
  /// Default transitions of a composite (or the chart), by ascending order.
  std::vector<const TransitionDef*> defaults(const std::string& scope) const;
  /// Transitions leaving a junction, by ascending order.
  std::vector<const TransitionDef*> from_junction(const std::string& junction) const;

  std::vector<const DataDecl*> data_of(DataKind kind) const;
};

std::string to_string(Decomposition d);
std::string to_string(DataKind k);
std::string to_string(EventKind k);

}  // namespace sfv::chart
