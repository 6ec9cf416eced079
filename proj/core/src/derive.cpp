#include "sfverify/derive.hpp"

#include <sstream>

#include "step_builder.hpp"

namespace sfv::refine {

using chart::ChartDef;

std::string PhaseLogEntry::str() const {
  std::ostringstream out;
  out << "phase " << phase << ": " << transformation << " [" << before << " -> " << after << "]";
  return out.str();
}

void DerivedProgram::install() {
  const std::string init_fn = program.name + "_initialize";
  const std::string out_fn = program.name + "_output";
  program.functions.clear();
  program.function_order.clear();
  program.add_function({init_fn, {}, init, {}});
  program.add_function({out_fn, {"tid"}, step_body, {}});
}

namespace {

void log_action(std::vector<PhaseLogEntry>& log, const std::string& what, const StmtPtr& before,
                const StmtPtr& after) {
  if (!before || before->is_skip()) return;
  const std::string b = digest(print(before, PrintStyle::Chart)), a = digest(print(after));
  if (b != a) log.push_back({1, "rewrite " + what + " over the concrete state", b, a});
}

}  // namespace

DerivedProgram derive_step(const ChartDef& c, const retrieve::RetrieveRelation& r, const ir::ImplProgram& concrete,
                           int broadcast_depth) {
  DerivedProgram d;
  d.program.name = c.identifier;
  d.program.dwork = concrete.dwork;
  d.program.blocks = concrete.blocks;
  d.program.inputs = concrete.inputs;
  d.program.outputs = concrete.outputs;
  for (const auto& [state, f] : r.status_formulas)
    if (f.kind == retrieve::FormulaKind::SubstateCode) d.program.constants[f.constant] = f.value;
  for (const auto& rc : r.concrete_invariant)
    for (const auto& [v, label] : rc.labels) d.program.constants[label] = v;
  for (const auto& ev : c.events) {
    const auto id = concrete.constants.find(ir::names::ev_const(ev.name));
    if (id != concrete.constants.end()) d.program.constants.insert(*id);
  }

  // Phase 1: data refinement of the chart actions.
  std::map<std::string, ExprPtr> fields;
  for (const auto& [abstract_var, field] : r.var_map) {
    const auto dot = field.find('.');
    fields[abstract_var.substr(2)] = Expr::fld(field.substr(0, dot), field.substr(dot + 1));
  }
  const ChartDef refined = detail::rewrite_variables(c, fields);
  for (const auto& [id, st] : c.states) {
    const auto& rs = refined.states.at(id);
    log_action(d.phase_log, id + " entry", st.entry, rs.entry);
    log_action(d.phase_log, id + " during", st.during, rs.during);
    log_action(d.phase_log, id + " exit", st.exit, rs.exit);
    for (std::size_t i = 0; i < st.on_actions.size(); ++i)
      log_action(d.phase_log, id + " on " + st.on_actions[i].event, st.on_actions[i].action,
                 rs.on_actions[i].action);
  }
  for (const auto& id : c.transition_order) {
    const auto& t = c.transitions.at(id);
    const auto& rt = refined.transitions.at(id);
    if (t.condition) {
      const std::string b = digest(print(t.condition)), a = digest(print(rt.condition));
      if (b != a) d.phase_log.push_back({1, "rewrite condition of " + id + " over the concrete state", b, a});
    }
    log_action(d.phase_log, "condition action of " + id, t.condition_action, rt.condition_action);
    log_action(d.phase_log, "transition action of " + id, t.transition_action, rt.transition_action);
  }

  // Phase 2: initialisation followed by the recursive step.
  std::vector<StmtPtr> zero;
  for (const ir::Record* rec : d.program.records())
    for (const auto& f : rec->fields) zero.push_back(Stmt::assign(Expr::fld(rec->name, f.name), Expr::lit(0)));
  d.init = Stmt::seq(std::move(zero));
  const StmtPtr skeleton = Stmt::call(c.identifier + "_step", {Expr::param("tid")});
  d.phase_log.push_back({2, "normal form: init ; loop { inputs ; step(tid) ; outputs ; end_cycle }",
                         digest(print(d.init)), digest(print(skeleton))});

  // Phase 3: resolve every interaction with the chart by inlining it.
  try {
    detail::StepBuilder b(refined, detail::Emission::Symbolic, broadcast_depth);
    d.step_body = b.output_body();
    std::string prev = digest(print(skeleton));
    for (const auto& note : b.notes()) {
      const std::string next = digest(prev + note);
      d.phase_log.push_back({3, note, prev, next});
      prev = next;
    }
    d.phase_log.push_back({3, "step body assembled", prev, digest(d.step_body)});
  } catch (const detail::BuildError& e) {
    throw DeriveError(e.what());
  }
  d.install();
  return d;
}

}  // namespace sfv::refine
