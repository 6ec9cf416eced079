#include "sfverify/reference_gen.hpp"

#include "sfverify/chart_validate.hpp"
#include "step_builder.hpp"

namespace sfv::ir {

using chart::ChartDef;
using chart::DataKind;
using chart::Decomposition;

namespace {

bool below_parallel(const ChartDef& c, const std::string& id) {
  for (std::string p = c.parent_of(id);; p = c.parent_of(p)) {
    if (c.decomposition_of(p) == Decomposition::Parallel) return true;
    if (c.is_chart(p)) return false;
  }
}

void encoding_fields(const ChartDef& c, const std::string& scope, ImplProgram& p) {
  const auto& kids = c.children(scope);
  if (!kids.empty()) {
    if (c.decomposition_of(scope) == Decomposition::Parallel) {
      for (const auto& k : kids) p.dwork.fields.push_back({names::active_flag(k), Sort::Byte});
    } else {
      p.dwork.fields.push_back({names::substate_code(names::tag(c.identifier, scope)), Sort::Byte});
      std::int64_t code = 0;
      for (const auto& k : kids) p.constants[names::in_const(k)] = ++code;
    }
  }
  if (!c.is_chart(scope) && c.state(scope).has_history)
    p.dwork.fields.push_back({names::history_code(scope), Sort::Byte});
  for (const auto& k : kids) encoding_fields(c, k, p);
}

}  // namespace

Parsed<ImplProgram> generate_reference(const ChartDef& c) {
  Parsed<ImplProgram> out;
  out.diagnostics = chart::validate_chart(c);
  for (const auto& [id, st] : c.states)
    if (st.has_history && below_parallel(c, id))
      out.diagnostics.push_back({st.loc, "unsupported: history inside a parallel composite: " + id});
  if (!out.diagnostics.empty()) return out;

  ImplProgram p;
  p.name = c.identifier;
  p.dwork.fields.push_back({names::active_flag(names::kChartTag), Sort::Byte});
  encoding_fields(c, c.identifier, p);
  for (const auto& d : c.data) {
    if (d.kind == DataKind::Input) p.inputs.fields.push_back({d.name, d.sort});
    else p.blocks.fields.push_back({d.name, d.sort});
    if (d.kind == DataKind::Output) p.outputs.fields.push_back({d.name, d.sort});
  }
  for (const auto& e : c.events)
    if (e.kind == chart::EventKind::Input) p.constants[names::ev_const(e.name)] = c.event_index(e.name);

  std::vector<StmtPtr> zero;
  for (const Record* r : p.records())
    for (const auto& f : r->fields) zero.push_back(Stmt::assign(Expr::fld(r->name, f.name), Expr::lit(0)));
  p.add_function({c.identifier + "_initialize", {}, Stmt::seq(std::move(zero)), {}});

  std::map<std::string, ExprPtr> fields;
  for (const auto& d : c.data) fields[d.name] = Expr::fld(d.kind == DataKind::Input ? "U" : "B", d.name);
  const ChartDef concrete = detail::rewrite_variables(c, fields);
  try {
    detail::StepBuilder b(concrete, detail::Emission::Concrete);
    p.add_function({c.identifier + "_output", {"tid"}, b.output_body(), {}});
  } catch (const detail::BuildError& e) {
    out.diagnostics.push_back({{}, std::string("unsupported: ") + e.what()});
    return out;
  }
  out.value = std::move(p);
  return out;
}

}  // namespace sfv::ir
