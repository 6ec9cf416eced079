#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/chart.hpp"
#include "sfverify/chart_sem.hpp"
#include "sfverify/impl_ir.hpp"

namespace sfv::retrieve {

using chart::ChartDef;
using chart::StateId;
using ir::ImplProgram;
using ir::ImplState;

enum class FormulaKind {
  ActiveFlag,    // field > 0
  SubstateCode,  // field == constant
};

struct StatusFormula {
  FormulaKind kind = FormulaKind::ActiveFlag;
  std::string field;     // "DWork.is_c1"
  std::string constant;  // SubstateCode only, e.g. "IN_P"
  std::int64_t value = 0;

  bool holds(const ImplState& cs) const;
  std::string str() const;
};

/// Concrete encoding of a state's history: `field == code` records `child`.
struct HistoryEncoding {
  std::string field;
  std::map<std::int64_t, StateId> codes;
};

/// `field` ranges over `values`; `labels` names the nonzero codes.
struct RangeConstraint {
  std::string field;
  std::vector<std::int64_t> values;
  std::map<std::int64_t, std::string> labels;

  bool admits(std::int64_t v) const;
  std::string str() const;
};

struct RetrieveRelation {
  std::string chart;
  /// One entry per chart state (the chart first). A malformed relation may
  /// list a state twice; the property check reports that.
  std::vector<std::pair<std::string, StatusFormula>> status_formulas;
  std::map<std::string, std::string> var_map;  // "v_u" -> "U.u"
  std::map<StateId, HistoryEncoding> history_map;  // empty: state_history = {}
  std::vector<RangeConstraint> concrete_invariant;
  /// ActiveFlag fields; enumerations use {0, 1} as their representatives.
  std::vector<std::string> flag_fields;

  const StatusFormula* formula(const std::string& state) const;
  const RangeConstraint* range(const std::string& field) const;
};

/// Builds the relation from the encoding templates: `is_active_X > 0` for
/// the chart and children of parallel states, `is_P == IN_X` for children
/// of sequential states, `was_H == IN_X` for history. Every mismatch between
/// chart and program is a conformance failure in the diagnostics.
Parsed<RetrieveRelation> synthesize(const ChartDef& c, const ImplProgram& p);

class AbstractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates the relation at a concrete state. Throws AbstractionError if
/// the state breaks the concrete invariant or holds a code no child owns.
sem::ChartDynState abstract(const RetrieveRelation& r, const ImplState& cs);

/// Human-readable invariant violations of `cs` (empty when it satisfies them).
std::vector<std::string> invariant_violations(const RetrieveRelation& r, const ImplState& cs);

struct PropertyReport {
  bool total = true;
  bool functional = true;
  bool surjective = true;
  std::size_t control_states = 0;
  std::size_t data_points = 0;
  std::size_t checks = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return total && functional && surjective; }
  std::string str() const;
};

/// Exhaustive check over invariant-satisfying concrete control states times
/// `data_domain` for every mapped variable.
PropertyReport check_functional_total_surjective(const RetrieveRelation& r, const ChartDef& c, const ImplProgram& p,
                                                 const std::vector<Value>& data_domain);

/// All concrete control states admitted by the invariant, with ActiveFlag
/// fields ranging over {0, 1}. Each entry maps field keys to values.
std::vector<std::map<std::string, std::int64_t>> control_states(const RetrieveRelation& r);

/// Abstract control configurations satisfying the chart's own invariants.
std::vector<sem::ChartDynState> abstract_configurations(const ChartDef& c);

/// Lets the program interpreter evaluate `ss(X)`, `history(H, X)` and
/// `event(E)` in derived programs.
ir::StructureHook structure_hook(const RetrieveRelation& r, const ChartDef& c);

std::string to_json(const RetrieveRelation& r);
std::string render(const RetrieveRelation& r);

}  // namespace sfv::retrieve
