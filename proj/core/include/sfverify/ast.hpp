#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfverify/value.hpp"

namespace sfv {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class ExprKind {
  Literal,
  Var,        // chart variable (chart actions and guards)
  Field,      // record.field of an implementation program
  Param,      // function parameter, e.g. `tid`
  Const,      // named program constant, e.g. `IN_P`
  Unary,
  Binary,
  // Chart-structure lookups. These only occur in derived programs before
  // simplification has folded them away.
  StateRef,   // a state identifier used as a value
  StructIdent,  // states(X).identifier
  Status,     // ss(X): activity of a state through the retrieve relation
  HistoryIs,  // history(S) = C through the retrieve relation
  EventLit,   // the numeric identity of an event
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Value value;
  std::string name;   // Var/Param/Const/StateRef/EventLit name; Field record; HistoryIs state
  std::string field;  // Field field name; HistoryIs child state
  UnOp uop = UnOp::Neg;
  BinOp bop = BinOp::Add;
  ExprPtr a;  // operand; StructIdent/Status take the state expression here
  ExprPtr b;

  static ExprPtr lit(Value v);
  static ExprPtr lit(std::int64_t v) { return lit(Value::integer(v)); }
  static ExprPtr var(std::string n);
  static ExprPtr fld(std::string record, std::string field);
  static ExprPtr param(std::string n);
  static ExprPtr constant(std::string n);
  static ExprPtr unary(UnOp op, ExprPtr x);
  static ExprPtr binary(BinOp op, ExprPtr x, ExprPtr y);
  static ExprPtr state_ref(std::string id);
  static ExprPtr struct_ident(std::string id);
  static ExprPtr status(ExprPtr state);
  static ExprPtr history_is(std::string state, std::string child);
  static ExprPtr event_lit(std::string ev);

  bool is_literal() const { return kind == ExprKind::Literal; }
  /// "Rec.field" for Field nodes.
  std::string field_key() const { return name + "." + field; }
};

std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return e ? print(*e) : std::string("<null>"); }
bool equal(const ExprPtr& x, const ExprPtr& y);

enum class StmtKind { Assign, If, Seq, Call, Broadcast };

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Arm {
  ExprPtr guard;
  StmtPtr body;
};

/// Statement tree shared by chart actions (assignments to Var targets and
/// local broadcasts) and implementation programs (assignments to Field
/// targets, conditionals and calls).
struct Stmt {
  StmtKind kind = StmtKind::Seq;
  SourceLoc loc;
  ExprPtr target;  // Assign: Var or Field node
  ExprPtr value;   // Assign
  std::vector<Arm> arms;    // If: guarded arms in evaluation order
  StmtPtr else_body;        // If: optional unguarded final arm
  std::vector<StmtPtr> body;  // Seq
  std::string callee;       // Call
  std::vector<ExprPtr> args;  // Call
  std::string event;        // Broadcast: local event
  std::string context;      // Broadcast: state whose activity is re-checked

  static StmtPtr assign(ExprPtr target, ExprPtr value, SourceLoc loc = {});
  static StmtPtr if_chain(std::vector<Arm> arms, StmtPtr else_body = nullptr, SourceLoc loc = {});
  static StmtPtr seq(std::vector<StmtPtr> body, SourceLoc loc = {});
  static StmtPtr skip() { return seq({}); }
  static StmtPtr call(std::string callee, std::vector<ExprPtr> args, SourceLoc loc = {});
  static StmtPtr broadcast(std::string event, std::string context = {}, SourceLoc loc = {});

  bool is_skip() const { return kind == StmtKind::Seq && body.empty(); }
};

/// Flattens nested sequences and drops empty ones.
StmtPtr flatten(const StmtPtr& s);
/// Concatenates statements into one flattened sequence.
StmtPtr sequence(std::vector<StmtPtr> parts);

enum class PrintStyle { Chart, Program };

/// Renders statements. Chart style uses `:=` and `send`; program style is
/// the C-like `.sfi` syntax.
std::string print(const Stmt& s, PrintStyle style = PrintStyle::Program, int indent = 0);
inline std::string print(const StmtPtr& s, PrintStyle style = PrintStyle::Program, int indent = 0) {
  return s ? print(*s, style, indent) : std::string();
}
bool equal(const StmtPtr& x, const StmtPtr& y);

/// Stable 64-bit FNV-1a digest of a canonical rendering, as 16 hex digits.
std::string digest(const std::string& text);
std::string digest(const StmtPtr& s);

/// Number of statement nodes, used for largest-subtree-first matching.
std::size_t size(const StmtPtr& s);

}  // namespace sfv
