#include "sfverify/chart_validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sfv::chart {

namespace {

class Validator {
 public:
  explicit Validator(const ChartDef& c) : c_(c) {}

  Diagnostics run() {
    unique_ids();
    tree();
    for (const auto& [id, st] : c_.states) state_rules(st);
    for (const auto& id : c_.transition_order) {
      auto it = c_.transitions.find(id);
      if (it != c_.transitions.end()) transition_rules(it->second);
    }
    for (const auto& [id, t] : c_.transitions)
      if (std::find(c_.transition_order.begin(), c_.transition_order.end(), id) == c_.transition_order.end())
        transition_rules(t);
    priorities();
    defaults();
    return std::move(out_);
  }

 private:
  void report(SourceLoc loc, std::string msg) { out_.push_back({loc, std::move(msg)}); }

  void unique_ids() {
    std::set<std::string> seen{c_.identifier};
    auto check = [&](const std::string& id, SourceLoc loc) {
      if (!seen.insert(id).second) report(loc, "duplicate identifier: " + id);
    };
    for (const auto& d : c_.data) check(d.name, d.loc);
    for (const auto& e : c_.events) check(e.name, e.loc);
    for (const auto& [id, s] : c_.states) check(id, s.loc);
    for (const auto& [id, j] : c_.junctions) check(id, j.loc);
    for (const auto& [id, t] : c_.transitions) check(id, t.loc);
  }

  bool scope_exists(const std::string& id) const { return c_.is_chart(id) || c_.is_state(id); }

  void tree() {
    for (const auto& [id, s] : c_.states) {
      if (!scope_exists(s.parent)) {
        report(s.loc, "unknown parent: " + id);
        continue;
      }
      std::string cur = s.parent;
      int hops = 0;
      while (!c_.is_chart(cur) && c_.is_state(cur) && hops <= static_cast<int>(c_.states.size())) {
        cur = c_.state(cur).parent;
        ++hops;
      }
      if (!c_.is_chart(cur)) report(s.loc, "parent cycle: " + id);
    }
    auto check_children = [&](const std::string& scope, const std::vector<StateId>& listed, SourceLoc loc) {
      std::set<StateId> expected;
      for (const auto& [id, s] : c_.states)
        if (s.parent == scope) expected.insert(id);
      std::set<StateId> got(listed.begin(), listed.end());
      if (got != expected || got.size() != listed.size()) report(loc, "child order mismatch: " + scope);
    };
    check_children(c_.identifier, c_.child_order, {});
    for (const auto& [id, s] : c_.states) check_children(id, s.child_order, s.loc);
    for (const auto& [id, j] : c_.junctions)
      if (!scope_exists(j.parent)) report(j.loc, "unknown parent: " + id);
  }

  void expr_vars(const ExprPtr& e, const std::string& owner, SourceLoc loc) {
    if (!e) return;
    if (e->kind == ExprKind::Var && !c_.find_data(e->name))
      report(loc, "undeclared variable: " + e->name + " in " + owner);
    if (e->kind != ExprKind::Literal && e->kind != ExprKind::Var && e->kind != ExprKind::Unary &&
        e->kind != ExprKind::Binary)
      report(loc, "unsupported expression in " + owner);
    expr_vars(e->a, owner, loc);
    expr_vars(e->b, owner, loc);
  }

  void action(const StmtPtr& s, const std::string& owner) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Seq:
        for (const auto& x : s->body) action(x, owner);
        break;
      case StmtKind::Assign: {
        if (s->target->kind != ExprKind::Var) {
          report(s->loc, "assignment target is not a chart variable in " + owner);
          break;
        }
        const DataDecl* d = c_.find_data(s->target->name);
        if (!d) report(s->loc, "undeclared variable: " + s->target->name + " in " + owner);
        else if (d->kind == DataKind::Input) report(s->loc, "assignment to input: " + d->name + " in " + owner);
        expr_vars(s->value, owner, s->loc);
        break;
      }
      case StmtKind::Broadcast: {
        const EventDecl* e = c_.find_event(s->event);
        if (!e) report(s->loc, "unknown event: " + s->event + " in " + owner);
        else if (e->kind != EventKind::Local) report(s->loc, "broadcast of non-local event: " + s->event + " in " + owner);
        break;
      }
      default: report(s->loc, "unsupported statement in " + owner); break;
    }
  }

  void state_rules(const StateDef& s) {
    if (s.has_history && s.decomposition == Decomposition::Parallel) report(s.loc, "history on parallel state: " + s.id);
    action(s.entry, s.id);
    action(s.during, s.id);
    action(s.exit, s.id);
    for (const auto& on : s.on_actions) {
      if (!c_.find_event(on.event)) report(s.loc, "unknown event: " + on.event + " in " + s.id);
      action(on.action, s.id);
    }
  }

  void transition_rules(const TransitionDef& t) {
    if (!scope_exists(t.scope)) {
      report(t.loc, "unknown scope: " + t.id);
      return;
    }
    if (c_.decomposition_of(t.scope) == Decomposition::Parallel) {
      report(t.loc, (t.is_default() ? "default transition in parallel state: " : "transition in parallel state: ") + t.scope);
      return;
    }
    if (t.source) {
      const std::string& src = *t.source;
      if (c_.is_state(src)) {
        if (src != t.scope && c_.state(src).parent != t.scope) report(t.loc, "source outside scope: " + t.id);
      } else if (c_.is_junction(src)) {
        if (c_.junctions.at(src).parent != t.scope) report(t.loc, "junction outside scope: " + t.id);
      } else {
        report(t.loc, "unknown source: " + t.id);
      }
    }
    if (c_.is_junction(t.target)) {
      if (c_.junctions.at(t.target).parent != t.scope) report(t.loc, "junction outside scope: " + t.id);
    } else if (c_.is_state(t.target)) {
      if (t.target == t.scope || !c_.is_descendant_or_self(t.target, t.scope)) {
        report(t.loc, "target outside scope: " + t.id);
      } else {
        const auto chain = c_.chain_below(t.scope, t.target);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
          if (c_.state(chain[i]).decomposition == Decomposition::Parallel) {
            report(t.loc, "target below parallel state: " + t.id);
            break;
          }
        }
      }
    } else {
      report(t.loc, "unknown target: " + t.id);
    }
    if (t.trigger && !c_.find_event(*t.trigger)) report(t.loc, "unknown event: " + *t.trigger + " in " + t.id);
    expr_vars(t.condition, t.id, t.loc);
    action(t.condition_action, t.id);
    action(t.transition_action, t.id);
  }

  void priorities() {
    std::map<std::string, std::set<int>> seen;
    std::set<std::string> reported;
    for (const auto& id : c_.transition_order) {
      auto it = c_.transitions.find(id);
      if (it == c_.transitions.end()) continue;
      const auto& t = it->second;
      const std::string key = t.source ? *t.source : "none in " + t.scope;
      if (!seen[key].insert(t.order).second && reported.insert(key).second)
        report(t.loc, "duplicate priority at source " + (t.source ? *t.source : "none (default of " + t.scope + ")"));
    }
  }

  void defaults() {
    auto check = [&](const std::string& scope, SourceLoc loc) {
      if (c_.decomposition_of(scope) != Decomposition::Sequential || c_.children(scope).empty()) return;
      if (c_.defaults(scope).empty()) report(loc, "missing default transition: " + scope);
    };
    check(c_.identifier, {});
    for (const auto& [id, s] : c_.states) check(id, s.loc);
  }

  const ChartDef& c_;
  Diagnostics out_;
};

bool stmt_broadcasts(const StmtPtr& s) {
  if (!s) return false;
  if (s->kind == StmtKind::Broadcast) return true;
  for (const auto& x : s->body)
    if (stmt_broadcasts(x)) return true;
  return false;
}

}  // namespace

Diagnostics validate_chart(const ChartDef& c) { return Validator(c).run(); }

bool has_broadcast(const ChartDef& c) {
  for (const auto& [id, s] : c.states) {
    if (stmt_broadcasts(s.entry) || stmt_broadcasts(s.during) || stmt_broadcasts(s.exit)) return true;
    for (const auto& on : s.on_actions)
      if (stmt_broadcasts(on.action)) return true;
  }
  for (const auto& [id, t] : c.transitions)
    if (stmt_broadcasts(t.condition_action) || stmt_broadcasts(t.transition_action)) return true;
  return false;
}

}  // namespace sfv::chart
