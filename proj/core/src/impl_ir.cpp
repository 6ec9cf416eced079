#include "sfverify/impl_ir.hpp"

#include <algorithm>
#include <set>

namespace sfv::ir {

const FieldDecl* Record::find(const std::string& field) const {
  for (const auto& f : fields)
    if (f.name == field) return &f;
  return nullptr;
}

const Record* ImplProgram::record(const std::string& rec) const {
  if (rec == dwork.name) return &dwork;
  if (rec == blocks.name) return &blocks;
  if (rec == inputs.name) return &inputs;
  if (rec == outputs.name) return &outputs;
  return nullptr;
}

std::vector<const Record*> ImplProgram::records() const { return {&dwork, &blocks, &inputs, &outputs}; }

const FieldDecl* ImplProgram::field(const std::string& rec, const std::string& name_) const {
  const Record* r = record(rec);
  return r ? r->find(name_) : nullptr;
}

const FunctionDef* ImplProgram::function(const std::string& fn) const {
  auto it = functions.find(fn);
  return it == functions.end() ? nullptr : &it->second;
}

std::string ImplProgram::output_function() const {
  if (functions.count(name + "_output")) return name + "_output";
  if (functions.count("output")) return "output";
  return {};
}

std::string ImplProgram::init_function() const {
  if (functions.count(name + "_initialize")) return name + "_initialize";
  if (functions.count("initialize")) return "initialize";
  return {};
}

void ImplProgram::add_function(FunctionDef f) {
  if (!functions.count(f.name)) function_order.push_back(f.name);
  functions[f.name] = std::move(f);
}

namespace names {

std::string active_flag(const std::string& scope_tag) { return "is_active_" + scope_tag; }
std::string substate_code(const std::string& scope_tag) { return "is_" + scope_tag; }
std::string history_code(const std::string& state) { return "was_" + state; }
std::string in_const(const std::string& state) { return "IN_" + state; }
std::string ev_const(const std::string& event) { return "EV_" + event; }
std::string tag(const std::string& chart_id, const std::string& scope) { return scope == chart_id ? kChartTag : scope; }

}  // namespace names

namespace {

class Checker {
 public:
  Checker(const ImplProgram& p, bool allow_structure) : p_(p), allow_structure_(allow_structure) {}

  Diagnostics run() {
    std::set<std::string> seen;
    for (const Record* r : p_.records())
      for (const auto& f : r->fields)
        if (!seen.insert(r->name + "." + f.name).second)
          out_.push_back({{}, "duplicate field " + r->name + "." + f.name});
    for (const auto& fn : p_.function_order) {
      const auto& f = p_.functions.at(fn);
      params_ = std::set<std::string>(f.params.begin(), f.params.end());
      fn_ = f.name;
      stmt(f.body);
    }
    return std::move(out_);
  }

 private:
  void expr(const ExprPtr& e, SourceLoc loc) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Literal: break;
      case ExprKind::Field:
        if (!p_.field(e->name, e->field)) out_.push_back({loc, "undeclared field " + e->field_key() + " in " + fn_});
        break;
      case ExprKind::Const:
        if (!p_.constants.count(e->name)) out_.push_back({loc, "undeclared constant " + e->name + " in " + fn_});
        break;
      case ExprKind::Param:
        if (!params_.count(e->name)) out_.push_back({loc, "unknown parameter " + e->name + " in " + fn_});
        break;
      case ExprKind::Var: out_.push_back({loc, "unknown identifier " + e->name + " in " + fn_}); break;
      case ExprKind::Unary:
      case ExprKind::Binary:
        expr(e->a, loc);
        expr(e->b, loc);
        break;
      default:
        if (!allow_structure_) out_.push_back({loc, "chart-structure expression " + print(e) + " in " + fn_});
        break;
    }
  }

  void stmt(const StmtPtr& s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Seq:
        for (const auto& x : s->body) stmt(x);
        break;
      case StmtKind::Assign:
        if (s->target->kind != ExprKind::Field) out_.push_back({s->loc, "assignment target must be a record field"});
        else if (!p_.field(s->target->name, s->target->field))
          out_.push_back({s->loc, "assignment to undeclared field " + s->target->field_key()});
        expr(s->value, s->loc);
        break;
      case StmtKind::If:
        for (const auto& a : s->arms) {
          expr(a.guard, s->loc);
          stmt(a.body);
        }
        stmt(s->else_body);
        break;
      case StmtKind::Call: {
        const FunctionDef* f = p_.function(s->callee);
        if (!f) out_.push_back({s->loc, "call to undefined function " + s->callee});
        else if (f->params.size() != s->args.size())
          out_.push_back({s->loc, "call to " + s->callee + " with " + std::to_string(s->args.size()) +
                                      " arguments, expected " + std::to_string(f->params.size())});
        for (const auto& a : s->args) expr(a, s->loc);
        break;
      }
      case StmtKind::Broadcast: out_.push_back({s->loc, "event broadcast in program " + fn_}); break;
    }
  }

  const ImplProgram& p_;
  bool allow_structure_;
  std::set<std::string> params_;
  std::string fn_;
  Diagnostics out_;
};

}  // namespace

Diagnostics check_program(const ImplProgram& p, bool allow_structure) { return Checker(p, allow_structure).run(); }

Value ImplState::get(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw ImplError("no field " + key);
  return it->second;
}

}  // namespace sfv::ir
