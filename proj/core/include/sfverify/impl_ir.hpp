#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"
#include "sfverify/chart_sem.hpp"
#include "sfverify/diagnostics.hpp"

namespace sfv::ir {

struct FieldDecl {
  std::string name;
  Sort sort = Sort::Int;
};

struct Record {
  std::string name;
  std::vector<FieldDecl> fields;

  const FieldDecl* find(const std::string& field) const;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  StmtPtr body;
  SourceLoc loc;
};

/// Imperative program in the shape of generated chart code: four records
/// (DWork, B, U, Y), integer constants and first-order functions.
struct ImplProgram {
  std::string name;
  Record dwork{"DWork", {}};
  Record blocks{"B", {}};
  Record inputs{"U", {}};
  Record outputs{"Y", {}};
  std::map<std::string, std::int64_t> constants;
  std::map<std::string, FunctionDef> functions;
  std::vector<std::string> function_order;

  const Record* record(const std::string& name) const;
  std::vector<const Record*> records() const;
  const FieldDecl* field(const std::string& record, const std::string& name) const;
  const FunctionDef* function(const std::string& name) const;
  /// `output` or `<name>_output`, whichever is defined (empty if neither).
  std::string output_function() const;
  std::string init_function() const;
  void add_function(FunctionDef f);
};

/// Generator naming conventions for encoding fields and constants.
namespace names {
inline const std::string kChartTag = "c1";
std::string active_flag(const std::string& scope_tag);   // is_active_<tag>
std::string substate_code(const std::string& scope_tag); // is_<tag>
std::string history_code(const std::string& state);      // was_<state>
std::string in_const(const std::string& state);          // IN_<state>
std::string ev_const(const std::string& event);          // EV_<event>
/// "c1" for the chart, the state id otherwise.
std::string tag(const std::string& chart_id, const std::string& scope);
}  // namespace names

/// Checks field, constant, parameter and call references. With
/// `allow_structure` the chart-structure expression kinds of derived
/// programs are accepted as well.
Diagnostics check_program(const ImplProgram& p, bool allow_structure = false);

/// Concrete state: every field of every record, keyed "Rec.field".
struct ImplState {
  std::map<std::string, Value> fields;

  Value get(const std::string& key) const;
  bool operator==(const ImplState& o) const { return fields == o.fields; }
};

class ImplError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluates expression kinds the program language itself lacks (status
/// lookups of derived programs). Returns nullopt for unknown kinds.
using StructureHook = std::function<std::optional<Value>(const Expr&, const ImplState&)>;

class Interpreter {
 public:
  explicit Interpreter(const ImplProgram& p, StructureHook hook = {});

  /// All fields zero, then `initialize` if defined.
  ImplState initial() const;
  ImplState zero() const;
  void call(ImplState& s, const std::string& fn, const std::vector<Value>& args) const;
  void exec(ImplState& s, const StmtPtr& body, const std::map<std::string, Value>& env) const;
  Value eval(const ImplState& s, const ExprPtr& e, const std::map<std::string, Value>& env) const;

 private:
  void exec_at(ImplState& s, const StmtPtr& body, const std::map<std::string, Value>& env, int depth) const;
  void call_at(ImplState& s, const std::string& fn, const std::vector<Value>& args, int depth) const;

  const ImplProgram& p_;
  StructureHook hook_;
};

struct ImplStepResult {
  ImplState state;
  std::map<std::string, Value> outputs;
};

/// Event identifiers passed to `output`, in calling order (0 if none).
std::vector<std::int64_t> event_ids(const ImplProgram& p, const sem::StepInput& in);

/// Writes inputs into U, calls `output` once per active event, reads Y.
ImplStepResult impl_step(const ImplProgram& p, const ImplState& s, const sem::StepInput& in);
std::vector<ImplStepResult> run_impl(const ImplProgram& p, const std::vector<sem::StepInput>& trace);

}  // namespace sfv::ir
