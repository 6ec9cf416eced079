#include <algorithm>

#include "sfverify/impl_ir.hpp"

namespace sfv::ir {

namespace {

constexpr int kMaxCallDepth = 256;

}  // namespace

Interpreter::Interpreter(const ImplProgram& p, StructureHook hook) : p_(p), hook_(std::move(hook)) {}

ImplState Interpreter::zero() const {
  ImplState s;
  for (const Record* r : p_.records())
    for (const auto& f : r->fields) s.fields[r->name + "." + f.name] = Value::integer(0).coerce(f.sort);
  return s;
}

ImplState Interpreter::initial() const {
  ImplState s = zero();
  const std::string init = p_.init_function();
  if (!init.empty()) call(s, init, {});
  return s;
}

void Interpreter::call(ImplState& s, const std::string& fn, const std::vector<Value>& args) const {
  call_at(s, fn, args, 0);
}

void Interpreter::call_at(ImplState& s, const std::string& fn, const std::vector<Value>& args, int depth) const {
  if (depth > kMaxCallDepth) throw ImplError("call depth exceeded in " + fn);
  const FunctionDef* f = p_.function(fn);
  if (!f) throw ImplError("call to undefined function " + fn);
  if (f->params.size() != args.size()) throw ImplError("arity mismatch calling " + fn);
  std::map<std::string, Value> env;
  for (std::size_t i = 0; i < args.size(); ++i) env[f->params[i]] = args[i];
  exec_at(s, f->body, env, depth);
}

void Interpreter::exec(ImplState& s, const StmtPtr& body, const std::map<std::string, Value>& env) const {
  exec_at(s, body, env, 0);
}

void Interpreter::exec_at(ImplState& s, const StmtPtr& st, const std::map<std::string, Value>& env, int depth) const {
  if (!st) return;
  switch (st->kind) {
    case StmtKind::Seq:
      for (const auto& x : st->body) exec_at(s, x, env, depth);
      return;
    case StmtKind::Assign: {
      const Value v = eval(s, st->value, env);
      const auto& t = *st->target;
      const FieldDecl* f = p_.field(t.name, t.field);
      if (t.kind != ExprKind::Field || !f) throw ImplError("assignment to unknown target " + print(st->target));
      s.fields[t.field_key()] = v.coerce(f->sort);
      return;
    }
    case StmtKind::If:
      for (const auto& a : st->arms) {
        if (eval(s, a.guard, env).truthy()) {
          exec_at(s, a.body, env, depth);
          return;
        }
      }
      exec_at(s, st->else_body, env, depth);
      return;
    case StmtKind::Call: {
      std::vector<Value> args;
      for (const auto& a : st->args) args.push_back(eval(s, a, env));
      call_at(s, st->callee, args, depth + 1);
      return;
    }
    case StmtKind::Broadcast: throw ImplError("event broadcast has no program semantics");
  }
}

Value Interpreter::eval(const ImplState& s, const ExprPtr& e, const std::map<std::string, Value>& env) const {
  switch (e->kind) {
    case ExprKind::Literal: return e->value;
    case ExprKind::Field: return s.get(e->field_key());
    case ExprKind::Const: {
      auto it = p_.constants.find(e->name);
      if (it == p_.constants.end()) throw ImplError("undeclared constant " + e->name);
      return Value::integer(it->second);
    }
    case ExprKind::Param: {
      auto it = env.find(e->name);
      if (it == env.end()) throw ImplError("unbound parameter " + e->name);
      return it->second;
    }
    case ExprKind::Unary: return apply(e->uop, eval(s, e->a, env));
    case ExprKind::Binary:
      // Both operands are always evaluated: expressions have no side effects.
      return apply(e->bop, eval(s, e->a, env), eval(s, e->b, env));
    default:
      if (hook_) {
        if (auto v = hook_(*e, s)) return *v;
      }
      throw ImplError("cannot evaluate " + print(e));
  }
}

std::vector<std::int64_t> event_ids(const ImplProgram& p, const sem::StepInput& in) {
  std::vector<std::int64_t> ids;
  for (const auto& ev : in.active_events) {
    auto it = p.constants.find(names::ev_const(ev));
    if (it == p.constants.end()) throw ImplError("program has no event " + ev);
    ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) ids.push_back(0);
  return ids;
}

ImplStepResult impl_step(const ImplProgram& p, const ImplState& s, const sem::StepInput& in) {
  Interpreter interp(p);
  ImplStepResult r{s, {}};
  for (const auto& [name, v] : in.inputs) {
    const FieldDecl* f = p.inputs.find(name);
    if (!f) throw ImplError("program has no input " + name);
    r.state.fields[p.inputs.name + "." + name] = v.coerce(f->sort);
  }
  const std::string out = p.output_function();
  if (out.empty()) throw ImplError("program has no output function");
  const FunctionDef* fn = p.function(out);
  for (std::int64_t id : event_ids(p, in)) {
    if (fn->params.empty()) interp.call(r.state, out, {});
    else interp.call(r.state, out, {Value::integer(id)});
  }
  for (const auto& f : p.outputs.fields) r.outputs[f.name] = r.state.get(p.outputs.name + "." + f.name);
  return r;
}

std::vector<ImplStepResult> run_impl(const ImplProgram& p, const std::vector<sem::StepInput>& trace) {
  std::vector<ImplStepResult> out;
  ImplState s = Interpreter(p).initial();
  for (const auto& st : trace) {
    out.push_back(impl_step(p, s, st));
    s = out.back().state;
  }
  return out;
}

}  // namespace sfv::ir
