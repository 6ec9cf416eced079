#include "step_builder.hpp"

#include "sfverify/chart_validate.hpp"
#include "sfverify/impl_ir.hpp"

namespace sfv::detail {

using chart::ChartDef;
using chart::Decomposition;
using chart::StateId;
using chart::TransitionDef;
namespace names = ir::names;

namespace {

bool contains_broadcast(const StmtPtr& s) {
  if (!s) return false;
  if (s->kind == StmtKind::Broadcast) return true;
  for (const auto& x : s->body)
    if (contains_broadcast(x)) return true;
  return false;
}

ExprPtr rewrite(const ExprPtr& e, const std::map<std::string, ExprPtr>& fields) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = fields.find(e->name);
      return it == fields.end() ? e : it->second;
    }
    case ExprKind::Unary: return Expr::unary(e->uop, rewrite(e->a, fields));
    case ExprKind::Binary: return Expr::binary(e->bop, rewrite(e->a, fields), rewrite(e->b, fields));
    default: return e;
  }
}

StmtPtr rewrite(const StmtPtr& s, const std::map<std::string, ExprPtr>& fields) {
  if (!s) return s;
  switch (s->kind) {
    case StmtKind::Assign: return Stmt::assign(rewrite(s->target, fields), rewrite(s->value, fields), s->loc);
    case StmtKind::Seq: {
      std::vector<StmtPtr> body;
      for (const auto& x : s->body) body.push_back(rewrite(x, fields));
      return Stmt::seq(std::move(body), s->loc);
    }
    case StmtKind::If: {
      std::vector<Arm> arms;
      for (const auto& a : s->arms) arms.push_back({rewrite(a.guard, fields), rewrite(a.body, fields)});
      return Stmt::if_chain(std::move(arms), rewrite(s->else_body, fields), s->loc);
    }
    default: return s;
  }
}

ExprPtr dwork(const std::string& f) { return Expr::fld("DWork", f); }

ExprPtr cmp(BinOp op, ExprPtr a, ExprPtr b) { return Expr::binary(op, std::move(a), std::move(b)); }

const std::function<StmtPtr()>& skip_k() {
  static const std::function<StmtPtr()> k = [] { return Stmt::skip(); };
  return k;
}

}  // namespace

ChartDef rewrite_variables(const ChartDef& c, const std::map<std::string, ExprPtr>& fields) {
  ChartDef out = c;
  for (auto& [id, st] : out.states) {
    st.entry = rewrite(st.entry, fields);
    st.during = rewrite(st.during, fields);
    st.exit = rewrite(st.exit, fields);
    for (auto& on : st.on_actions) on.action = rewrite(on.action, fields);
  }
  for (auto& [id, t] : out.transitions) {
    t.condition = rewrite(t.condition, fields);
    t.condition_action = rewrite(t.condition_action, fields);
    t.transition_action = rewrite(t.transition_action, fields);
  }
  return out;
}

StepBuilder::StepBuilder(const ChartDef& c, Emission emission, int broadcast_depth)
    : c_(c), emission_(emission), cps_(chart::has_broadcast(c)), depth_limit_(broadcast_depth) {
  for (const auto& [id, t] : c_.transitions) condition_sends_ = condition_sends_ || contains_broadcast(t.condition_action);
}

StmtPtr StepBuilder::output_body() {
  Frame top{std::nullopt, 0, skip_k()};
  std::vector<StmtPtr> parts{frame(top)};
  for (const auto* d : c_.data_of(chart::DataKind::Output))
    parts.push_back(Stmt::assign(Expr::fld("Y", d->name), Expr::fld("B", d->name)));
  return sequence(std::move(parts));
}

// ---- expressions ------------------------------------------------------------

ExprPtr StepBuilder::status(const std::string& id) const {
  if (emission_ == Emission::Symbolic) return Expr::status(Expr::struct_ident(id));
  if (c_.is_chart(id)) return cmp(BinOp::Ne, dwork(names::active_flag(names::kChartTag)), Expr::lit(0));
  const std::string parent = c_.parent_of(id);
  if (c_.decomposition_of(parent) == Decomposition::Parallel)
    return cmp(BinOp::Ne, dwork(names::active_flag(id)), Expr::lit(0));
  return cmp(BinOp::Eq, dwork(names::substate_code(names::tag(c_.identifier, parent))),
             Expr::constant(names::in_const(id)));
}

ExprPtr StepBuilder::status_in(const std::string& id, const Frame& fr) const {
  auto it = fr.known.find(id);
  return it == fr.known.end() ? status(id) : Expr::lit(Value::boolean(it->second));
}

std::map<std::string, bool> StepBuilder::known_at(const std::string& ctx) const {
  std::map<std::string, bool> known;
  std::string s = ctx;
  while (true) {
    known[s] = true;
    if (c_.is_chart(s)) break;
    const std::string parent = c_.parent_of(s);
    if (c_.decomposition_of(parent) == Decomposition::Sequential)
      for (const auto& sib : c_.children(parent))
        if (sib != s) known[sib] = false;
    s = parent;
  }
  return known;
}

ExprPtr StepBuilder::inactive(const std::string& id) const {
  if (emission_ == Emission::Symbolic) return Expr::unary(UnOp::Not, status(id));
  const ExprPtr s = status(id);
  return cmp(negate_comparison(s->bop), s->a, s->b);
}

ExprPtr StepBuilder::history_is(const StateId& h, const StateId& child) const {
  if (emission_ == Emission::Symbolic) return Expr::history_is(h, child);
  return cmp(BinOp::Eq, dwork(names::history_code(h)), Expr::constant(names::in_const(child)));
}

ExprPtr StepBuilder::event_test(const std::string& ev, const Frame& fr) const {
  if (fr.event) return Expr::lit(Value::boolean(*fr.event == ev));
  const auto* d = c_.find_event(ev);
  if (!d || d->kind != chart::EventKind::Input) return Expr::lit(Value::boolean(false));
  const ExprPtr id = emission_ == Emission::Symbolic ? Expr::event_lit(ev) : Expr::constant(names::ev_const(ev));
  return cmp(BinOp::Eq, Expr::param("tid"), id);
}

ExprPtr StepBuilder::guard(const TransitionDef& t, const Frame& fr) const {
  ExprPtr g = t.trigger ? event_test(*t.trigger, fr) : Expr::lit(Value::boolean(true));
  if (!t.condition) return g;
  ExprPtr cond = t.condition;
  if (cond->is_literal()) cond = Expr::lit(Value::boolean(cond->value.truthy()));
  else if (emission_ == Emission::Symbolic) cond = cmp(BinOp::Ne, cond, Expr::lit(0));
  if (g->is_literal()) return g->value.truthy() ? cond : g;
  if (cond->is_literal()) return cond->value.truthy() ? g : cond;
  return cmp(BinOp::And, g, cond);
}

StmtPtr StepBuilder::set_status(const StateId& s, bool on) const {
  if (c_.is_chart(s)) return Stmt::assign(dwork(names::active_flag(names::kChartTag)), Expr::lit(on ? 1 : 0));
  const std::string parent = c_.parent_of(s);
  if (c_.decomposition_of(parent) == Decomposition::Parallel)
    return Stmt::assign(dwork(names::active_flag(s)), Expr::lit(on ? 1 : 0));
  const ExprPtr field = dwork(names::substate_code(names::tag(c_.identifier, parent)));
  return Stmt::assign(field, on ? Expr::constant(names::in_const(s)) : Expr::lit(0));
}

std::vector<StateId> StepBuilder::dispatch_order(const std::string& scope) const {
  const auto& kids = c_.children(scope);
  return {kids.rbegin(), kids.rend()};
}

// ---- control ----------------------------------------------------------------

StmtPtr StepBuilder::choose(std::vector<Case> cases, Builder fallback, Cont k) {
  std::vector<Case> live;
  for (auto& cs : cases) {
    if (cs.guard->is_literal()) {
      if (!cs.guard->value.truthy()) continue;
      fallback = cs.body;
      break;
    }
    live.push_back(std::move(cs));
  }
  const Cont inner = cps_ ? k : skip_k();
  StmtPtr result;
  if (live.empty()) {
    result = fallback(inner);
  } else if (emission_ == Emission::Symbolic) {
    result = fallback(inner);
    for (auto it = live.rbegin(); it != live.rend(); ++it)
      result = Stmt::if_chain({{it->guard, it->body(inner)}, {Expr::unary(UnOp::Not, it->guard), result}});
  } else {
    std::vector<Arm> arms;
    for (const auto& cs : live) arms.push_back({cs.guard, cs.body(inner)});
    StmtPtr els = fallback(inner);
    if (els && els->is_skip()) els = nullptr;
    result = Stmt::if_chain(std::move(arms), els);
  }
  if (cps_) return result;
  return sequence({result, k()});
}

StmtPtr StepBuilder::frame(const Frame& fr) {
  const std::string chart = c_.identifier;
  notes_.push_back(fr.event ? "unfold chart execution for event " + *fr.event : "unfold chart execution for tid");
  const ExprPtr off = fr.known.count(chart) ? Expr::lit(Value::boolean(!fr.known.at(chart))) : inactive(chart);
  return choose({{off,
                  [=, this](Cont k) { return sequence({set_status(chart, true), enter_children(chart, fr, k)}); }}},
                [=, this](Cont k) { return exec_children(chart, fr, k); }, fr.end);
}

StmtPtr StepBuilder::actions(const StmtPtr& a, const std::string& ctx, const Frame& fr, Cont k) {
  if (!a || a->is_skip()) return k();
  switch (a->kind) {
    case StmtKind::Seq: return action_list(a->body, 0, ctx, fr, k);
    case StmtKind::Assign: return sequence({a, k()});
    case StmtKind::Broadcast: {
      if (fr.depth + 1 > depth_limit_)
        throw BuildError("broadcast of " + a->event + " nests deeper than " + std::to_string(depth_limit_) +
                         " chart executions");
      Cont after = k;
      if (!c_.is_chart(ctx)) {
        const Cont outer_end = fr.end;
        after = [=, this] {
          return choose({{status(ctx), [k](Cont) { return k(); }}}, [outer_end](Cont) { return outer_end(); },
                        skip_k());
        };
      }
      notes_.push_back("inline broadcast of " + a->event + " from " + ctx);
      return frame(Frame{a->event, fr.depth + 1, after, known_at(ctx)});
    }
    default: throw BuildError("statement not allowed in chart actions: " + print(a, PrintStyle::Chart));
  }
}

StmtPtr StepBuilder::action_list(const std::vector<StmtPtr>& xs, std::size_t i, const std::string& ctx,
                                 const Frame& fr, Cont k) {
  if (i == xs.size()) return k();
  return actions(xs[i], ctx, fr, [=, this] { return action_list(xs, i + 1, ctx, fr, k); });
}

StmtPtr StepBuilder::search(const std::vector<const TransitionDef*>& ts, std::size_t i, const std::string& scope,
                            Path path, std::vector<std::string> visited, const Frame& fr, Found found, Builder fail,
                            Cont k) {
  if (i == ts.size()) return fail(k);
  const TransitionDef* t = ts[i];
  Builder rest = [=, this](Cont k2) { return search(ts, i + 1, scope, path, visited, fr, found, fail, k2); };
  Builder on = [=, this](Cont k2) {
    Path p2 = path;
    p2.push_back(t);
    return actions(t->condition_action, scope, fr, [=, this] {
      if (c_.is_state(t->target)) return found(p2, k2);
      for (const auto& j : visited)
        if (j == t->target) throw BuildError("junction cycle through " + j);
      auto v2 = visited;
      v2.push_back(t->target);
      return search(c_.from_junction(t->target), 0, scope, p2, v2, fr, found, rest, k2);
    });
  };
  return choose({{guard(*t, fr), on}}, rest, k);
}

StmtPtr StepBuilder::exec_children(const std::string& scope, const Frame& fr, Cont k) {
  const auto& kids = c_.children(scope);
  if (kids.empty()) return k();
  if (c_.decomposition_of(scope) == Decomposition::Parallel) {
    Frame plain = fr;
    plain.known.clear();
    return exec_parallel(kids, 0, plain, k);
  }
  std::vector<Case> cases;
  for (const auto& kid : dispatch_order(scope))
    cases.push_back({status_in(kid, fr), [=, this](Cont k2) { return exec_state(kid, fr, k2); }});
  return choose(std::move(cases), [](Cont k2) { return k2(); }, k);
}

StmtPtr StepBuilder::exec_parallel(const std::vector<StateId>& kids, std::size_t i, const Frame& fr, Cont k) {
  if (i == kids.size()) return k();
  const StateId kid = kids[i];
  return choose({{status(kid), [=, this](Cont k2) { return exec_state(kid, fr, k2); }}},
                [](Cont k2) { return k2(); }, [=, this] { return exec_parallel(kids, i + 1, fr, k); });
}

StmtPtr StepBuilder::exec_state(const StateId& s, const Frame& fr, Cont k) {
  const std::string parent = c_.parent_of(s);
  Found outer = [=, this](const Path& p, Cont k2) {
    return exit_state(s, !cps_, fr, [=, this] { return take(p, parent, fr, k2); });
  };
  Builder inner = [=, this](Cont k2) {
    Found found = [=, this](const Path& p, Cont k3) {
      return exit_children(s, fr, [=, this] { return take(p, s, fr, k3); });
    };
    Builder rest = [=, this](Cont k3) { return state_body(s, 0, fr, k3); };
    return search(c_.outgoing(s, s), 0, s, {}, {}, fr, found, rest, k2);
  };
  return search(c_.outgoing(s, parent), 0, parent, {}, {}, fr, outer, inner, k);
}

StmtPtr StepBuilder::state_body(const StateId& s, std::size_t i, const Frame& fr, Cont k) {
  const auto& st = c_.state(s);
  if (i == 0) return actions(st.during, s, fr, [=, this] { return state_body(s, 1, fr, k); });
  if (i - 1 == st.on_actions.size()) {
    bool sends = condition_sends_ || contains_broadcast(st.during);
    for (const auto& on : st.on_actions) sends = sends || contains_broadcast(on.action);
    if (!sends || fr.known.empty()) return exec_children(s, fr, k);
    Frame plain = fr;
    plain.known.clear();
    return exec_children(s, plain, k);
  }
  const auto& on = st.on_actions[i - 1];
  const StmtPtr act = on.action;
  return choose({{event_test(on.event, fr), [=, this](Cont k2) { return actions(act, s, fr, k2); }}},
                [](Cont k2) { return k2(); }, [=, this] { return state_body(s, i + 1, fr, k); });
}

StmtPtr StepBuilder::take(const Path& path, const std::string& scope, const Frame& fr, Cont k) {
  std::string ids;
  for (const auto* t : path) ids += (ids.empty() ? "" : ",") + t->id;
  notes_.push_back("inline path " + ids);
  return take_from(path, 0, scope, fr, k);
}

StmtPtr StepBuilder::take_from(const Path& path, std::size_t j, const std::string& scope, const Frame& fr, Cont k) {
  if (j < path.size())
    return actions(path[j]->transition_action, scope, fr,
                   [=, this] { return take_from(path, j + 1, scope, fr, k); });
  const StateId target = path.back()->target;
  return enter_chain(c_.chain_below(scope, target), 0, target, fr, k);
}

StmtPtr StepBuilder::enter_chain(const std::vector<StateId>& chain, std::size_t j, const StateId& target,
                                 const Frame& fr, Cont k) {
  if (j == chain.size()) return enter_children(target, fr, k);
  return enter_one(chain[j], fr, [=, this] { return enter_chain(chain, j + 1, target, fr, k); });
}

StmtPtr StepBuilder::enter_parallel(const std::vector<StateId>& kids, std::size_t i, const Frame& fr, Cont k) {
  if (i == kids.size()) return k();
  const StateId kid = kids[i];
  return enter_one(kid, fr, [=, this] {
    return enter_children(kid, fr, [=, this] { return enter_parallel(kids, i + 1, fr, k); });
  });
}

StmtPtr StepBuilder::enter_one(const StateId& s, const Frame& fr, Cont k) {
  return sequence({set_status(s, true), actions(c_.state(s).entry, s, fr, k)});
}

StmtPtr StepBuilder::enter_children(const std::string& scope, const Frame& fr, Cont k) {
  const auto& kids = c_.children(scope);
  if (kids.empty()) return k();
  if (c_.decomposition_of(scope) == Decomposition::Parallel) return enter_parallel(kids, 0, fr, k);
  Builder by_default = [=, this](Cont k2) {
    Found found = [=, this](const Path& p, Cont k3) { return take(p, scope, fr, k3); };
    return search(c_.defaults(scope), 0, scope, {}, {}, fr, found, [](Cont k3) { return k3(); }, k2);
  };
  if (c_.is_chart(scope) || !c_.state(scope).has_history) return by_default(k);
  std::vector<Case> cases;
  for (const auto& kid : dispatch_order(scope))
    cases.push_back({history_is(scope, kid), [=, this](Cont k2) {
                       return enter_one(kid, fr, [=, this] { return enter_children(kid, fr, k2); });
                     }});
  return choose(std::move(cases), by_default, k);
}

StmtPtr StepBuilder::exit_state(const StateId& s, bool known_active, const Frame& fr, Cont k) {
  Builder body = [=, this](Cont k2) {
    return exit_children(s, fr, [=, this] {
      return actions(c_.state(s).exit, s, fr, [=, this] {
        std::vector<StmtPtr> parts{set_status(s, false)};
        const std::string parent = c_.parent_of(s);
        if (c_.is_state(parent) && c_.state(parent).has_history)
          parts.push_back(Stmt::assign(dwork(names::history_code(parent)), Expr::constant(names::in_const(s))));
        parts.push_back(k2());
        return sequence(std::move(parts));
      });
    });
  };
  if (emission_ == Emission::Concrete && known_active) return body(k);
  return choose({{status(s), body}}, [](Cont k2) { return k2(); }, k);
}

StmtPtr StepBuilder::exit_children(const StateId& s, const Frame& fr, Cont k) {
  const auto& kids = c_.children(s);
  if (kids.empty()) return k();
  if (c_.decomposition_of(s) == Decomposition::Parallel) {
    std::vector<StateId> rev(kids.rbegin(), kids.rend());
    return exit_parallel(rev, 0, fr, k);
  }
  std::vector<Case> cases;
  for (const auto& kid : dispatch_order(s))
    cases.push_back({status(kid), [=, this](Cont k2) { return exit_state(kid, true, fr, k2); }});
  return choose(std::move(cases), [](Cont k2) { return k2(); }, k);
}

StmtPtr StepBuilder::exit_parallel(const std::vector<StateId>& kids, std::size_t i, const Frame& fr, Cont k) {
  if (i == kids.size()) return k();
  return exit_state(kids[i], false, fr, [=, this] { return exit_parallel(kids, i + 1, fr, k); });
}

}  // namespace sfv::detail
