#include "sfverify/chart_sem.hpp"

#include <algorithm>
#include <set>

namespace sfv::sem {

using chart::Decomposition;
using chart::TransitionDef;

bool ChartDynState::active(const std::string& id) const {
  auto it = state_status.find(id);
  return it != state_status.end() && it->second;
}

bool ChartDynState::operator==(const ChartDynState& o) const {
  return state_status == o.state_status && state_history == o.state_history && vars == o.vars;
}

std::string TraceEvent::str() const {
  switch (kind) {
    case TraceKind::Entered: return "enter " + subject;
    case TraceKind::Exited: return "exit " + subject;
    case TraceKind::Action: return subject + "." + detail;
    case TraceKind::TransitionTaken: return "take " + subject;
    case TraceKind::BroadcastBegin: return "send " + subject + " from " + detail;
    case TraceKind::BroadcastEnd: return "end " + subject;
    case TraceKind::EarlyReturn: return "early-return " + subject;
  }
  return subject;
}

namespace {

struct EarlyReturn {};

struct Found {
  StateId target;
  std::vector<const TransitionDef*> path;
};

class Machine {
 public:
  Machine(const ChartDef& c, ChartDynState& s, const SemOptions& opt, std::vector<TraceEvent>& trace)
      : c_(c), s_(s), opt_(opt), trace_(trace) {}

  void exec_chart(const std::optional<std::string>& ev) {
    if (depth_ >= opt_.broadcast_depth_limit)
      throw SemError(SemError::Kind::BroadcastDivergence,
                     "broadcast divergence: nesting exceeds " + std::to_string(opt_.broadcast_depth_limit));
    ++depth_;
    const auto saved = ev_;
    ev_ = ev;
    try {
      if (!s_.active(c_.identifier)) {
        s_.state_status[c_.identifier] = true;
        note(TraceKind::Entered, c_.identifier);
        enter_children(c_.identifier);
      } else {
        exec_children(c_.identifier);
      }
    } catch (const EarlyReturn&) {
      // The interrupted frame ends here; enclosing frames resume.
    }
    ev_ = saved;
    --depth_;
  }

  std::optional<Found> search_from(const std::string& origin, const std::optional<std::string>& ev) {
    ev_ = ev;
    if (c_.is_junction(origin)) return junction(origin, c_.parent_of(origin));
    const std::string scope = c_.parent_of(origin);
    return search(c_.outgoing(origin, scope), scope);
  }

  /// Returns false if the broadcast left `context` inactive.
  bool send(const std::string& ev, const std::string& context) {
    note(TraceKind::BroadcastBegin, ev, context);
    exec_chart(ev);
    note(TraceKind::BroadcastEnd, ev);
    return c_.is_chart(context) || s_.active(context);
  }

 private:
  void note(TraceKind k, const std::string& subject, const std::string& detail = {}) {
    if (opt_.record_trace) trace_.push_back({k, subject, detail});
  }

  Value eval(const ExprPtr& e) const {
    switch (e->kind) {
      case ExprKind::Literal: return e->value;
      case ExprKind::Var: {
        auto it = s_.vars.find(e->name);
        if (it == s_.vars.end()) throw SemError(SemError::Kind::BadInput, "undeclared variable '" + e->name + "'");
        return it->second;
      }
      case ExprKind::Unary: return apply(e->uop, eval(e->a));
      case ExprKind::Binary: return apply(e->bop, eval(e->a), eval(e->b));
      default: throw SemError(SemError::Kind::BadInput, "expression not allowed in chart: " + print(e));
    }
  }

  void run(const StmtPtr& a, const std::string& context, const std::string& what) {
    if (!a || a->is_skip()) return;
    note(TraceKind::Action, context, what);
    exec(a, context);
  }

  void exec(const StmtPtr& a, const std::string& context) {
    switch (a->kind) {
      case StmtKind::Seq:
        for (const auto& x : a->body) exec(x, context);
        break;
      case StmtKind::Assign: {
        const auto* d = c_.find_data(a->target->name);
        const Value v = eval(a->value);
        s_.vars[a->target->name] = d ? v.coerce(d->sort) : v;
        break;
      }
      case StmtKind::Broadcast:
        if (!send(a->event, context)) {
          note(TraceKind::EarlyReturn, context);
          throw EarlyReturn{};
        }
        break;
      default: throw SemError(SemError::Kind::BadInput, "statement not allowed in chart actions");
    }
  }

  bool enabled(const TransitionDef& t) const {
    if (t.trigger && (!ev_ || *ev_ != *t.trigger)) return false;
    return !t.condition || eval(t.condition).truthy();
  }

  std::optional<Found> search(const std::vector<const TransitionDef*>& ts, const std::string& scope) {
    for (const auto* t : ts) {
      if (!enabled(*t)) continue;
      run(t->condition_action, scope, "condition " + t->id);
      if (c_.is_state(t->target)) return Found{t->target, {t}};
      if (auto sub = junction(t->target, scope)) {
        sub->path.insert(sub->path.begin(), t);
        return sub;
      }
    }
    return std::nullopt;
  }

  std::optional<Found> junction(const std::string& j, const std::string& scope) {
    if (std::find(on_stack_.begin(), on_stack_.end(), j) != on_stack_.end())
      throw SemError(SemError::Kind::JunctionCycle, "junction cycle through '" + j + "'");
    on_stack_.push_back(j);
    auto r = search(c_.from_junction(j), scope);
    on_stack_.pop_back();
    return r;
  }

  void exec_children(const std::string& scope) {
    const auto& kids = c_.children(scope);
    if (c_.decomposition_of(scope) == Decomposition::Parallel) {
      for (const auto& k : kids)
        if (s_.active(k)) exec_state(k);
      return;
    }
    for (const auto& k : kids) {
      if (s_.active(k)) {
        exec_state(k);
        return;
      }
    }
  }

  void exec_state(const StateId& id) {
    const auto& st = c_.state(id);
    if (auto f = search(c_.outgoing(id, st.parent), st.parent)) {
      exit_state(id);
      take(*f, st.parent);
      return;
    }
    if (auto f = search(c_.outgoing(id, id), id)) {
      for (const auto& k : st.child_order)
        if (s_.active(k)) exit_state(k);
      take(*f, id);
      return;
    }
    run(st.during, id, "during");
    for (const auto& on : st.on_actions)
      if (ev_ && *ev_ == on.event) run(on.action, id, "on " + on.event);
    exec_children(id);
  }

  void take(const Found& f, const std::string& scope) {
    for (const auto* t : f.path) {
      note(TraceKind::TransitionTaken, t->id);
      run(t->transition_action, scope, "transition " + t->id);
    }
    enter_chain(scope, f.target);
  }

  void enter_chain(const std::string& scope, const StateId& target) {
    for (const auto& id : c_.chain_below(scope, target)) enter_one(id);
    enter_children(target);
  }

  void enter_one(const StateId& id) {
    s_.state_status[id] = true;
    note(TraceKind::Entered, id);
    run(c_.state(id).entry, id, "entry");
  }

  void enter_children(const std::string& scope) {
    const auto& kids = c_.children(scope);
    if (kids.empty()) return;
    if (c_.decomposition_of(scope) == Decomposition::Parallel) {
      for (const auto& k : kids) {
        enter_one(k);
        enter_children(k);
      }
      return;
    }
    if (!c_.is_chart(scope) && c_.state(scope).has_history) {
      auto it = s_.state_history.find(scope);
      if (it != s_.state_history.end()) {
        const StateId h = it->second;
        enter_one(h);
        enter_children(h);
        return;
      }
    }
    if (auto f = search(c_.defaults(scope), scope)) take(*f, scope);
  }

  void exit_state(const StateId& id) {
    if (!s_.active(id)) return;
    const auto& st = c_.state(id);
    if (st.decomposition == Decomposition::Parallel) {
      for (auto it = st.child_order.rbegin(); it != st.child_order.rend(); ++it) exit_state(*it);
    } else {
      for (const auto& k : st.child_order)
        if (s_.active(k)) exit_state(k);
    }
    run(st.exit, id, "exit");
    s_.state_status[id] = false;
    note(TraceKind::Exited, id);
    if (c_.is_state(st.parent) && c_.state(st.parent).has_history) s_.state_history[st.parent] = id;
  }

  const ChartDef& c_;
  ChartDynState& s_;
  const SemOptions& opt_;
  std::vector<TraceEvent>& trace_;
  std::optional<std::string> ev_;
  std::vector<std::string> on_stack_;
  int depth_ = 0;
};

void apply_inputs(const ChartDef& c, ChartDynState& s, const StepInput& in) {
  for (const auto& [name, v] : in.inputs) {
    const auto* d = c.find_data(name);
    if (!d || d->kind != chart::DataKind::Input)
      throw SemError(SemError::Kind::BadInput, "'" + name + "' is not an input of chart " + c.identifier);
    s.vars[name] = v.coerce(d->sort);
  }
}

std::vector<std::string> ordered_events(const ChartDef& c, const StepInput& in) {
  std::set<std::string> wanted(in.active_events.begin(), in.active_events.end());
  for (const auto& e : wanted) {
    const auto* d = c.find_event(e);
    if (!d || d->kind != chart::EventKind::Input)
      throw SemError(SemError::Kind::BadInput, "'" + e + "' is not an input event of chart " + c.identifier);
  }
  std::vector<std::string> out;
  for (const auto& e : c.events)
    if (wanted.count(e.name)) out.push_back(e.name);
  return out;
}

}  // namespace

ChartDynState init_state(const ChartDef& c) {
  ChartDynState s;
  if (!c.states.empty() || !c.data.empty() || !c.events.empty()) s.state_status[c.identifier] = false;
  for (const auto& [id, st] : c.states) s.state_status[id] = false;
  for (const auto& d : c.data) s.vars[d.name] = Value::integer(0).coerce(d.sort);
  return s;
}

StepResult step(const ChartDef& c, const ChartDynState& s, const StepInput& in, const SemOptions& opt) {
  StepResult r;
  r.state = s;
  apply_inputs(c, r.state, in);
  const auto events = ordered_events(c, in);
  Machine m(c, r.state, opt, r.trace);
  if (events.empty()) {
    m.exec_chart(std::nullopt);
  } else {
    for (const auto& e : events) m.exec_chart(e);
  }
  for (const auto* d : c.data_of(chart::DataKind::Output)) r.outputs[d->name] = r.state.vars.at(d->name);
  if (opt.check_invariants) {
    const auto bad = check_invariants(c, r.state);
    if (!bad.empty()) throw SemError(SemError::Kind::Invariant, "state invariant violated: " + bad.front());
  }
  return r;
}

PathOutcome resolve_path(const ChartDef& c, ChartDynState& s, const std::string& origin,
                         const std::optional<std::string>& event, const SemOptions& opt) {
  std::vector<TraceEvent> trace;
  Machine m(c, s, opt, trace);
  PathOutcome out;
  if (auto f = m.search_from(origin, event)) {
    out.completed = true;
    out.target = f->target;
    for (const auto* t : f->path) out.path.push_back(t->id);
  }
  return out;
}

BroadcastOutcome broadcast(const ChartDef& c, const ChartDynState& s, const std::string& ev, const std::string& context,
                           const SemOptions& opt) {
  const auto* d = c.find_event(ev);
  if (!d || d->kind != chart::EventKind::Local)
    throw SemError(SemError::Kind::BadInput, "'" + ev + "' is not a local event of chart " + c.identifier);
  BroadcastOutcome out;
  out.state = s;
  Machine m(c, out.state, opt, out.trace);
  out.early_return = !m.send(ev, context);
  return out;
}

std::vector<StepResult> run_trace(const ChartDef& c, const std::vector<StepInput>& trace, const SemOptions& opt) {
  std::vector<StepResult> out;
  out.reserve(trace.size());
  ChartDynState s = init_state(c);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    try {
      out.push_back(step(c, s, trace[i], opt));
    } catch (const SemError& e) {
      throw SemError(e.kind(), "step " + std::to_string(i + 1) + ": " + e.what());
    }
    s = out.back().state;
  }
  return out;
}

std::vector<std::string> check_invariants(const ChartDef& c, const ChartDynState& s) {
  std::vector<std::string> bad;
  auto check_scope = [&](const std::string& scope) {
    const auto& kids = c.children(scope);
    const bool on = s.active(scope);
    if (c.decomposition_of(scope) == Decomposition::Parallel) {
      for (const auto& k : kids)
        if (s.active(k) != on) bad.push_back("parallel children of " + scope + " disagree on activity");
    } else {
      int n = 0;
      for (const auto& k : kids) n += s.active(k) ? 1 : 0;
      if (n > 1) bad.push_back("more than one active child in " + scope);
    }
    for (const auto& k : kids)
      if (s.active(k) && !on) bad.push_back(k + " active below inactive " + scope);
  };
  check_scope(c.identifier);
  for (const auto& [id, st] : c.states) check_scope(id);
  for (const auto& [h, child] : s.state_history) {
    if (!c.is_state(h) || !c.state(h).has_history) bad.push_back("history recorded for " + h + " which has none");
    else if (!c.is_state(child) || c.state(child).parent != h) bad.push_back("history of " + h + " is not a child");
  }
  return bad;
}

}  // namespace sfv::sem
