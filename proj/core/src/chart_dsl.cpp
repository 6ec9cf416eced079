#include "sfverify/chart_dsl.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace sfv::chart {

namespace {

using detail::Token;
using detail::TokenStream;

class ChartParser {
 public:
  explicit ChartParser(TokenStream& ts) : ts_(ts) {}

  ChartDef run() {
    ts_.expect("chart");
    const auto& name = ts_.expect_ident("chart name");
    chart_.identifier = name.text;
    declare(name.text, name.loc);
    parse_body(chart_.identifier);
    if (!ts_.at_end()) ts_.fail("unexpected '" + ts_.peek().text + "' after chart body");
    resolve();
    return std::move(chart_);
  }

  Diagnostics& diagnostics() { return diags_; }

 private:
  void declare(const std::string& id, SourceLoc loc) {
    if (!ids_.insert(id).second) diags_.push_back({loc, "duplicate identifier '" + id + "'"});
  }

  Sort parse_sort() {
    const auto& t = ts_.expect_ident("sort (int or float)");
    if (t.text == "int") return Sort::Int;
    if (t.text == "float") return Sort::Float;
    ts_.fail_at(t.loc, "unknown sort '" + t.text + "'");
  }

  // Body of the chart or of a state.
  void parse_body(const std::string& scope) {
    ts_.expect("{");
    while (!ts_.accept("}")) {
      if (ts_.at_end()) ts_.fail("unterminated block");
      const Token& kw = ts_.peek();
      if (kw.kind != detail::TokKind::Ident) ts_.fail("expected declaration but found '" + kw.text + "'");
      const std::string k = kw.text;
      const bool is_chart = scope == chart_.identifier;
      if (k == "decomposition") {
        ts_.next();
        const auto& d = ts_.expect_ident("sequential or parallel");
        Decomposition dec;
        if (d.text == "sequential") dec = Decomposition::Sequential;
        else if (d.text == "parallel") dec = Decomposition::Parallel;
        else ts_.fail_at(d.loc, "unknown decomposition '" + d.text + "'");
        ts_.expect(";");
        if (is_chart) chart_.decomposition = dec;
        else chart_.states[scope].decomposition = dec;
      } else if (is_chart && (k == "input" || k == "output" || k == "local")) {
        ts_.next();
        DataDecl d;
        d.kind = k == "input" ? DataKind::Input : k == "output" ? DataKind::Output : DataKind::Local;
        const auto& n = ts_.expect_ident("variable name");
        d.name = n.text;
        d.loc = n.loc;
        ts_.expect(":");
        d.sort = parse_sort();
        ts_.expect(";");
        declare(d.name, d.loc);
        chart_.data.push_back(d);
      } else if (is_chart && k == "event") {
        ts_.next();
        EventDecl e;
        const auto& n = ts_.expect_ident("event name");
        e.name = n.text;
        e.loc = n.loc;
        ts_.expect(":");
        const auto& kind = ts_.expect_ident("input or local");
        if (kind.text == "input") e.kind = EventKind::Input;
        else if (kind.text == "local") e.kind = EventKind::Local;
        else ts_.fail_at(kind.loc, "unknown event kind '" + kind.text + "'");
        ts_.expect(";");
        declare(e.name, e.loc);
        chart_.events.push_back(e);
      } else if (k == "state") {
        ts_.next();
        parse_state(scope);
      } else if (k == "junction") {
        ts_.next();
        const auto& n = ts_.expect_ident("junction name");
        ts_.expect(";");
        declare(n.text, n.loc);
        chart_.junctions[n.text] = JunctionDef{n.text, scope, n.loc};
        chart_.junction_order.push_back(n.text);
      } else if (k == "transition") {
        ts_.next();
        parse_transition(scope);
      } else if (!is_chart && (k == "entry" || k == "during" || k == "exit")) {
        ts_.next();
        StmtPtr a = parse_action_block();
        auto& st = chart_.states[scope];
        (k == "entry" ? st.entry : k == "during" ? st.during : st.exit) = a;
      } else if (!is_chart && k == "on") {
        ts_.next();
        const auto& ev = ts_.expect_ident("event name");
        event_refs_.push_back({ev.text, ev.loc});
        chart_.states[scope].on_actions.push_back({ev.text, parse_action_block()});
      } else if (!is_chart && k == "history") {
        ts_.next();
        ts_.expect(";");
        chart_.states[scope].has_history = true;
      } else if (!is_chart && k == "bind") {
        const SourceLoc loc = kw.loc;
        ts_.next();
        skip_balanced_block();
        diags_.push_back({loc, "unsupported feature: binding actions in state '" + scope + "'"});
      } else {
        ts_.fail("unknown declaration '" + k + "'");
      }
    }
  }

  void skip_balanced_block() {
    ts_.expect("{");
    int depth = 1;
    while (depth > 0) {
      if (ts_.at_end()) ts_.fail("unterminated block");
      const auto& t = ts_.next();
      if (t.text == "{") ++depth;
      if (t.text == "}") --depth;
    }
  }

  void parse_state(const std::string& parent) {
    const auto& n = ts_.expect_ident("state name");
    declare(n.text, n.loc);
    if (chart_.states.count(n.text)) {
      // Duplicate: parse into a scratch slot so the rest can still be checked.
      skip_balanced_block();
      return;
    }
    StateDef st;
    st.id = n.text;
    st.parent = parent;
    st.loc = n.loc;
    chart_.states[st.id] = st;
    if (parent == chart_.identifier) chart_.child_order.push_back(st.id);
    else chart_.states[parent].child_order.push_back(st.id);
    parse_body(st.id);
  }

  void parse_transition(const std::string& scope) {
    const auto& n = ts_.expect_ident("transition name");
    TransitionDef t;
    t.id = n.text;
    t.scope = scope;
    t.loc = n.loc;
    declare(t.id, t.loc);
    bool have_source = false;
    bool have_target = false;
    ts_.expect("{");
    while (!ts_.accept("}")) {
      const auto& kw = ts_.expect_ident("transition field");
      if (kw.text == "source") {
        const auto& s = ts_.expect_ident("source state, junction or 'none'");
        if (s.text != "none") {
          t.source = s.text;
          refs_.push_back({s.text, s.loc, "source"});
        }
        have_source = true;
        ts_.expect(";");
      } else if (kw.text == "target") {
        const auto& s = ts_.expect_ident("target state or junction");
        t.target = s.text;
        refs_.push_back({s.text, s.loc, "target"});
        have_target = true;
        ts_.expect(";");
      } else if (kw.text == "trigger") {
        const auto& s = ts_.expect_ident("event name");
        t.trigger = s.text;
        event_refs_.push_back({s.text, s.loc});
        ts_.expect(";");
      } else if (kw.text == "cond") {
        t.condition = parse_expression();
        ts_.expect(";");
      } else if (kw.text == "condition_action") {
        t.condition_action = parse_action_block();
      } else if (kw.text == "transition_action") {
        t.transition_action = parse_action_block();
      } else if (kw.text == "order") {
        const auto& num = ts_.next();
        if (num.kind != detail::TokKind::Number || num.float_literal) ts_.fail_at(num.loc, "order must be a natural number");
        t.order = std::stoi(num.text);
        ts_.expect(";");
      } else {
        ts_.fail_at(kw.loc, "unknown transition field '" + kw.text + "'");
      }
    }
    if (!have_source) diags_.push_back({n.loc, "transition '" + t.id + "' has no source (use 'source none;' for a default transition)"});
    if (!have_target) diags_.push_back({n.loc, "transition '" + t.id + "' has no target"});
    if (!chart_.transitions.count(t.id)) {
      chart_.transition_order.push_back(t.id);
      chart_.transitions[t.id] = std::move(t);
    }
  }

  ExprPtr parse_expression() {
    const SourceLoc loc = ts_.peek().loc;
    ExprPtr e = detail::parse_expr(ts_);
    note_vars(e, loc);
    return e;
  }

  void note_vars(const ExprPtr& e, SourceLoc loc) {
    if (!e) return;
    if (e->kind == ExprKind::Field) {
      diags_.push_back({loc, "record field '" + e->field_key() + "' is not allowed in chart expressions"});
      return;
    }
    if (e->kind == ExprKind::Var) var_refs_.push_back({e->name, loc});
    note_vars(e->a, loc);
    note_vars(e->b, loc);
  }

  StmtPtr parse_action_block() {
    std::vector<StmtPtr> body;
    ts_.expect("{");
    while (!ts_.accept("}")) {
      const SourceLoc loc = ts_.peek().loc;
      if (ts_.accept("send")) {
        const auto& ev = ts_.expect_ident("event name");
        event_refs_.push_back({ev.text, ev.loc});
        ts_.expect(";");
        body.push_back(Stmt::broadcast(ev.text, {}, loc));
        continue;
      }
      const auto& v = ts_.expect_ident("assignment target");
      var_refs_.push_back({v.text, v.loc});
      ts_.expect(":=");
      ExprPtr rhs = parse_expression();
      ts_.expect(";");
      body.push_back(Stmt::assign(Expr::var(v.text), rhs, loc));
    }
    return Stmt::seq(std::move(body));
  }

  void resolve() {
    for (const auto& r : refs_) {
      if (!chart_.is_state(r.name) && !chart_.is_junction(r.name))
        diags_.push_back({r.loc, "unknown " + r.role + " '" + r.name + "'"});
    }
    for (const auto& r : event_refs_) {
      if (!chart_.find_event(r.name)) diags_.push_back({r.loc, "unknown event '" + r.name + "'"});
    }
    for (const auto& r : var_refs_) {
      if (!chart_.find_data(r.name)) diags_.push_back({r.loc, "unknown variable '" + r.name + "'"});
    }
  }

  struct Ref {
    std::string name;
    SourceLoc loc;
    std::string role;
  };
  struct NameRef {
    std::string name;
    SourceLoc loc;
  };

  TokenStream& ts_;
  ChartDef chart_;
  Diagnostics diags_;
  std::set<std::string> ids_;
  std::vector<Ref> refs_;
  std::vector<NameRef> event_refs_;
  std::vector<NameRef> var_refs_;
};

void print_block(std::ostringstream& out, int indent, const std::string& head, const StmtPtr& action) {
  const std::string pad(indent * 2, ' ');
  out << pad << head << " {\n" << print(action, PrintStyle::Chart, indent + 1) << pad << "}\n";
}

void print_scope(const ChartDef& c, const std::string& scope, int indent, std::ostringstream& out);

void print_state(const ChartDef& c, const StateDef& s, int indent, std::ostringstream& out) {
  const std::string pad(indent * 2, ' ');
  out << pad << "state " << s.id << " {\n";
  const std::string in(indent * 2 + 2, ' ');
  if (s.decomposition == Decomposition::Parallel) out << in << "decomposition parallel;\n";
  if (s.has_history) out << in << "history;\n";
  if (s.entry && !s.entry->is_skip()) print_block(out, indent + 1, "entry", s.entry);
  if (s.during && !s.during->is_skip()) print_block(out, indent + 1, "during", s.during);
  if (s.exit && !s.exit->is_skip()) print_block(out, indent + 1, "exit", s.exit);
  for (const auto& on : s.on_actions) print_block(out, indent + 1, "on " + on.event, on.action);
  print_scope(c, s.id, indent + 1, out);
  out << pad << "}\n";
}

void print_scope(const ChartDef& c, const std::string& scope, int indent, std::ostringstream& out) {
  const std::string pad(indent * 2, ' ');
  for (const auto& child : c.children(scope)) print_state(c, c.state(child), indent, out);
  for (const auto& j : c.junction_order)
    if (c.junctions.at(j).parent == scope) out << pad << "junction " << j << ";\n";
  for (const auto& id : c.transition_order) {
    const auto& t = c.transitions.at(id);
    if (t.scope != scope) continue;
    out << pad << "transition " << t.id << " {\n";
    const std::string in(indent * 2 + 2, ' ');
    out << in << "source " << (t.source ? *t.source : std::string("none")) << ";\n";
    out << in << "target " << t.target << ";\n";
    if (t.trigger) out << in << "trigger " << *t.trigger << ";\n";
    if (t.condition) out << in << "cond " << print(t.condition) << ";\n";
    if (t.condition_action && !t.condition_action->is_skip())
      print_block(out, indent + 1, "condition_action", t.condition_action);
    if (t.transition_action && !t.transition_action->is_skip())
      print_block(out, indent + 1, "transition_action", t.transition_action);
    out << in << "order " << t.order << ";\n";
    out << pad << "}\n";
  }
}

bool same_action(const StmtPtr& a, const StmtPtr& b) { return equal(flatten(a), flatten(b)); }

}  // namespace

Parsed<ChartDef> parse_chart(const std::string& text) {
  Parsed<ChartDef> result;
  detail::LexOptions opts;
  auto toks = detail::tokenize(text, result.diagnostics, opts);
  if (!result.diagnostics.empty()) return result;
  TokenStream ts(std::move(toks));
  ChartParser parser(ts);
  try {
    ChartDef c = parser.run();
    result.diagnostics = parser.diagnostics();
    if (result.diagnostics.empty()) result.value = std::move(c);
  } catch (const ParseError& e) {
    result.diagnostics = parser.diagnostics();
    for (const auto& d : e.diagnostics()) result.diagnostics.push_back(d);
  }
  return result;
}

std::string print_chart(const ChartDef& c) {
  std::ostringstream out;
  out << "chart " << c.identifier << " {\n";
  if (c.decomposition == Decomposition::Parallel) out << "  decomposition parallel;\n";
  for (const auto& d : c.data) out << "  " << to_string(d.kind) << ' ' << d.name << " : " << to_string(d.sort) << ";\n";
  for (const auto& e : c.events) out << "  event " << e.name << " : " << to_string(e.kind) << ";\n";
  print_scope(c, c.identifier, 1, out);
  out << "}\n";
  return out.str();
}

bool same_chart(const ChartDef& a, const ChartDef& b) {
  if (a.identifier != b.identifier || a.decomposition != b.decomposition || a.child_order != b.child_order) return false;
  if (a.data.size() != b.data.size() || a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (a.data[i].name != b.data[i].name || a.data[i].kind != b.data[i].kind || a.data[i].sort != b.data[i].sort) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (a.events[i].name != b.events[i].name || a.events[i].kind != b.events[i].kind) return false;
  if (a.states.size() != b.states.size() || a.transitions.size() != b.transitions.size() ||
      a.junctions.size() != b.junctions.size())
    return false;
  for (const auto& [id, s] : a.states) {
    auto it = b.states.find(id);
    if (it == b.states.end()) return false;
    const auto& o = it->second;
    if (s.parent != o.parent || s.decomposition != o.decomposition || s.child_order != o.child_order ||
        s.has_history != o.has_history || !same_action(s.entry, o.entry) || !same_action(s.during, o.during) ||
        !same_action(s.exit, o.exit) || s.on_actions.size() != o.on_actions.size())
      return false;
    for (std::size_t i = 0; i < s.on_actions.size(); ++i)
      if (s.on_actions[i].event != o.on_actions[i].event || !same_action(s.on_actions[i].action, o.on_actions[i].action))
        return false;
  }
  for (const auto& [id, t] : a.transitions) {
    auto it = b.transitions.find(id);
    if (it == b.transitions.end()) return false;
    const auto& o = it->second;
    if (t.scope != o.scope || t.source != o.source || t.target != o.target || t.trigger != o.trigger ||
        t.order != o.order || !equal(t.condition, o.condition) || !same_action(t.condition_action, o.condition_action) ||
        !same_action(t.transition_action, o.transition_action))
      return false;
  }
  for (const auto& [id, j] : a.junctions) {
    auto it = b.junctions.find(id);
    if (it == b.junctions.end() || it->second.parent != j.parent) return false;
  }
  return true;
}

}  // namespace sfv::chart
