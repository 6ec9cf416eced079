#include "sfverify/retrieve.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sfv::retrieve {

using chart::Decomposition;
using chart::DataKind;
namespace names = ir::names;

bool StatusFormula::holds(const ImplState& cs) const {
  const Value v = cs.get(field);
  if (kind == FormulaKind::ActiveFlag) return v.as_double() > 0;
  return v.as_int() == value;
}

std::string StatusFormula::str() const {
  if (kind == FormulaKind::ActiveFlag) return field + " > 0";
  return field + " == " + constant;
}

bool RangeConstraint::admits(std::int64_t v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

std::string RangeConstraint::str() const {
  std::ostringstream out;
  out << field << " in {";
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << values[i];
  out << '}';
  return out.str();
}

const StatusFormula* RetrieveRelation::formula(const std::string& state) const {
  for (const auto& [id, f] : status_formulas)
    if (id == state) return &f;
  return nullptr;
}

const RangeConstraint* RetrieveRelation::range(const std::string& field) const {
  for (const auto& rc : concrete_invariant)
    if (rc.field == field) return &rc;
  return nullptr;
}

namespace {

void preorder(const ChartDef& c, const std::string& scope, std::vector<std::string>& out) {
  out.push_back(scope);
  for (const auto& k : c.children(scope)) preorder(c, k, out);
}

}  // namespace

Parsed<RetrieveRelation> synthesize(const ChartDef& c, const ImplProgram& p) {
  Parsed<RetrieveRelation> result;
  RetrieveRelation r;
  r.chart = c.identifier;
  auto& diags = result.diagnostics;
  std::set<std::string> used;
  auto need_field = [&](const std::string& field, const std::string& why) {
    if (!p.dwork.find(field)) {
      diags.push_back({{}, "conformance failure: missing field DWork." + field + " for " + why});
      return false;
    }
    used.insert(field);
    return true;
  };
  auto need_const = [&](const std::string& state) -> std::optional<std::int64_t> {
    auto it = p.constants.find(names::in_const(state));
    if (it == p.constants.end()) {
      diags.push_back({{}, "conformance failure: missing constant " + names::in_const(state) + " for state " + state});
      return std::nullopt;
    }
    return it->second;
  };

  const std::string chart_flag = names::active_flag(names::kChartTag);
  if (need_field(chart_flag, "chart " + c.identifier)) {
    r.status_formulas.push_back({c.identifier, {FormulaKind::ActiveFlag, "DWork." + chart_flag, {}, 0}});
    r.flag_fields.push_back("DWork." + chart_flag);
  }

  std::vector<std::string> scopes;
  preorder(c, c.identifier, scopes);
  std::map<std::string, StatusFormula> formulas;
  for (const auto& scope : scopes) {
    const auto& kids = c.children(scope);
    if (kids.empty()) continue;
    const std::string tag = names::tag(c.identifier, scope);
    if (c.decomposition_of(scope) == Decomposition::Parallel) {
      for (const auto& k : kids) {
        const std::string f = names::active_flag(k);
        if (!need_field(f, "parallel substate " + k)) continue;
        formulas[k] = {FormulaKind::ActiveFlag, "DWork." + f, {}, 0};
        r.flag_fields.push_back("DWork." + f);
      }
      continue;
    }
    const std::string code = names::substate_code(tag);
    if (!need_field(code, "composite " + scope)) continue;
    RangeConstraint rc{"DWork." + code, {0}, {}};
    std::set<std::int64_t> seen;
    for (const auto& k : kids) {
      auto v = need_const(k);
      if (!v) continue;
      if (*v == 0 || !seen.insert(*v).second)
        diags.push_back({{}, "conformance failure: code " + names::in_const(k) + " = " + std::to_string(*v) +
                                 " is zero or shared within " + scope});
      formulas[k] = {FormulaKind::SubstateCode, rc.field, names::in_const(k), *v};
      rc.values.push_back(*v);
      rc.labels[*v] = names::in_const(k);
    }
    std::sort(rc.values.begin(), rc.values.end());
    r.concrete_invariant.push_back(rc);
  }
  for (const auto& s : scopes)
    if (auto it = formulas.find(s); it != formulas.end()) r.status_formulas.push_back({s, it->second});

  for (const auto& s : scopes) {
    if (c.is_chart(s) || !c.state(s).has_history) continue;
    const std::string f = names::history_code(s);
    if (!need_field(f, "history of " + s)) continue;
    HistoryEncoding h{"DWork." + f, {}};
    RangeConstraint rc{"DWork." + f, {0}, {}};
    for (const auto& k : c.children(s)) {
      auto it = p.constants.find(names::in_const(k));
      if (it == p.constants.end()) continue;
      h.codes[it->second] = k;
      rc.values.push_back(it->second);
      rc.labels[it->second] = names::in_const(k);
    }
    std::sort(rc.values.begin(), rc.values.end());
    r.history_map[s] = h;
    r.concrete_invariant.push_back(rc);
  }

  std::set<std::string> used_b, used_u, used_y;
  for (const auto& d : c.data) {
    const ir::Record& rec = d.kind == DataKind::Input ? p.inputs : p.blocks;
    if (!rec.find(d.name)) {
      diags.push_back({{}, "conformance failure: variable " + d.name + " has no field " + rec.name + "." + d.name});
      continue;
    }
    r.var_map["v_" + d.name] = rec.name + "." + d.name;
    (d.kind == DataKind::Input ? used_u : used_b).insert(d.name);
    if (d.kind == DataKind::Output) {
      if (!p.outputs.find(d.name))
        diags.push_back({{}, "conformance failure: output " + d.name + " has no field Y." + d.name});
      used_y.insert(d.name);
    }
  }
  auto extra = [&](const ir::Record& rec, const std::set<std::string>& ok) {
    for (const auto& f : rec.fields)
      if (!ok.count(f.name))
        diags.push_back({{}, "conformance failure: concrete field " + rec.name + "." + f.name + " has no chart counterpart"});
  };
  extra(p.dwork, used);
  extra(p.blocks, used_b);
  extra(p.inputs, used_u);
  extra(p.outputs, used_y);

  if (diags.empty()) result.value = std::move(r);
  return result;
}

std::vector<std::string> invariant_violations(const RetrieveRelation& r, const ImplState& cs) {
  std::vector<std::string> bad;
  for (const auto& rc : r.concrete_invariant) {
    const Value v = cs.get(rc.field);
    if (v.is_float() || !rc.admits(v.as_int())) bad.push_back(rc.str() + " violated: " + rc.field + " = " + v.str());
  }
  return bad;
}

sem::ChartDynState abstract(const RetrieveRelation& r, const ImplState& cs) {
  const auto bad = invariant_violations(r, cs);
  if (!bad.empty()) throw AbstractionError(bad.front());
  std::map<std::string, std::set<std::int64_t>> codes;
  for (const auto& [id, f] : r.status_formulas)
    if (f.kind == FormulaKind::SubstateCode) codes[f.field].insert(f.value);
  for (const auto& [field, vals] : codes) {
    const std::int64_t v = cs.get(field).as_int();
    if (v != 0 && !vals.count(v))
      throw AbstractionError(field + " = " + std::to_string(v) + " names no substate");
  }
  sem::ChartDynState a;
  for (const auto& [id, f] : r.status_formulas)
    if (!a.state_status.count(id)) a.state_status[id] = f.holds(cs);
  for (const auto& [h, enc] : r.history_map) {
    const std::int64_t v = cs.get(enc.field).as_int();
    if (v == 0) continue;
    auto it = enc.codes.find(v);
    if (it == enc.codes.end()) throw AbstractionError(enc.field + " = " + std::to_string(v) + " names no substate");
    a.state_history[h] = it->second;
  }
  for (const auto& [av, field] : r.var_map) a.vars[av.substr(2)] = cs.get(field);
  return a;
}

std::vector<std::map<std::string, std::int64_t>> control_states(const RetrieveRelation& r) {
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> dims;
  for (const auto& f : r.flag_fields) dims.push_back({f, {0, 1}});
  for (const auto& rc : r.concrete_invariant) dims.push_back({rc.field, rc.values});
  std::vector<std::map<std::string, std::int64_t>> out{{}};
  for (const auto& [field, vals] : dims) {
    std::vector<std::map<std::string, std::int64_t>> next;
    for (const auto& partial : out)
      for (auto v : vals) {
        auto m = partial;
        m[field] = v;
        next.push_back(std::move(m));
      }
    out = std::move(next);
  }
  return out;
}

namespace {

using Status = std::map<std::string, bool>;

void all_off(const ChartDef& c, const std::string& scope, Status& s) {
  for (const auto& k : c.children(scope)) {
    s[k] = false;
    all_off(c, k, s);
  }
}

std::vector<Status> below(const ChartDef& c, const std::string& scope) {
  const auto& kids = c.children(scope);
  std::vector<Status> out;
  if (kids.empty()) return {Status{}};
  Status off;
  all_off(c, scope, off);
  if (c.decomposition_of(scope) == Decomposition::Parallel) {
    out.push_back(off);
    std::vector<Status> acc{Status{}};
    for (const auto& k : kids) {
      std::vector<Status> next;
      for (const auto& partial : acc)
        for (const auto& sub : below(c, k)) {
          Status m = partial;
          m.insert(sub.begin(), sub.end());
          m[k] = true;
          next.push_back(std::move(m));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
    return out;
  }
  out.push_back(off);
  for (const auto& k : kids)
    for (const auto& sub : below(c, k)) {
      Status m = off;
      for (const auto& [id, v] : sub) m[id] = v;
      m[k] = true;
      out.push_back(std::move(m));
    }
  return out;
}

}  // namespace

std::vector<sem::ChartDynState> abstract_configurations(const ChartDef& c) {
  std::vector<Status> statuses;
  Status off{{c.identifier, false}};
  all_off(c, c.identifier, off);
  statuses.push_back(off);
  for (auto sub : below(c, c.identifier)) {
    sub[c.identifier] = true;
    statuses.push_back(std::move(sub));
  }
  std::vector<std::map<StateId, StateId>> histories{{}};
  for (const auto& [id, st] : c.states) {
    if (!st.has_history) continue;
    std::vector<std::map<StateId, StateId>> next;
    for (const auto& h : histories) {
      next.push_back(h);
      for (const auto& k : st.child_order) {
        auto m = h;
        m[id] = k;
        next.push_back(std::move(m));
      }
    }
    histories = std::move(next);
  }
  std::vector<sem::ChartDynState> out;
  for (const auto& s : statuses)
    for (const auto& h : histories) {
      sem::ChartDynState d;
      d.state_status = s;
      d.state_history = h;
      out.push_back(std::move(d));
    }
  return out;
}

PropertyReport check_functional_total_surjective(const RetrieveRelation& r, const ChartDef& c, const ImplProgram& p,
                                                 const std::vector<Value>& data_domain) {
  PropertyReport rep;
  const auto controls = control_states(r);
  std::vector<std::string> data_fields;
  for (const auto& [av, f] : r.var_map) data_fields.push_back(f);
  std::vector<std::vector<Value>> points{{}};
  for (std::size_t i = 0; i < data_fields.size(); ++i) {
    std::vector<std::vector<Value>> next;
    for (const auto& partial : points)
      for (const auto& v : data_domain) {
        auto m = partial;
        m.push_back(v);
        next.push_back(std::move(m));
      }
    points = std::move(next);
  }
  rep.control_states = controls.size();
  rep.data_points = points.size();
  auto note = [&](const std::string& msg) {
    if (rep.counterexamples.size() < 16) rep.counterexamples.push_back(msg);
  };
  auto describe = [](const std::map<std::string, std::int64_t>& cs) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, v] : cs) {
      out << (first ? "" : ", ") << k << '=' << v;
      first = false;
    }
    return out.str();
  };

  const ir::Interpreter interp(p);
  std::set<std::pair<Status, std::map<StateId, StateId>>> images;
  for (const auto& control : controls) {
    for (const auto& point : points) {
      ImplState cs = interp.zero();
      for (const auto& [k, v] : control) cs.fields[k] = Value::integer(v);
      for (std::size_t i = 0; i < data_fields.size(); ++i) cs.fields[data_fields[i]] = point[i];
      ++rep.checks;
      try {
        const auto a = abstract(r, cs);
        images.insert({a.state_status, a.state_history});
        for (const auto& [state, f] : r.status_formulas) {
          if (f.holds(cs) != a.state_status.at(state)) {
            rep.functional = false;
            note("functional: " + state + " has conflicting formulas at {" + describe(control) + "}");
          }
        }
        for (std::size_t i = 0; i < data_fields.size(); ++i) {
          const std::string av = "v_" + data_fields[i].substr(data_fields[i].find('.') + 1);
          if (a.vars.at(av.substr(2)) != point[i]) {
            rep.functional = false;
            note("functional: " + av + " does not read " + data_fields[i]);
          }
        }
      } catch (const AbstractionError& e) {
        rep.total = false;
        note("total: undefined at {" + describe(control) + "}: " + e.what());
      } catch (const ir::ImplError& e) {
        rep.total = false;
        note(std::string("total: ") + e.what());
      }
    }
  }
  for (const auto& a : abstract_configurations(c)) {
    if (!images.count({a.state_status, a.state_history})) {
      rep.surjective = false;
      std::ostringstream out;
      out << "surjective: no preimage for active {";
      bool first = true;
      for (const auto& [id, on] : a.state_status)
        if (on) {
          out << (first ? "" : ", ") << id;
          first = false;
        }
      out << '}';
      for (const auto& [h, k] : a.state_history) out << " history " << h << '=' << k;
      note(out.str());
    }
  }
  return rep;
}

std::string PropertyReport::str() const {
  std::ostringstream out;
  out << "total " << (total ? "yes" : "no") << ", functional " << (functional ? "yes" : "no") << ", surjective "
      << (surjective ? "yes" : "no") << " over " << control_states << " control states x " << data_points
      << " data points (" << checks << " checks, " << counterexamples.size() << " counterexamples)";
  for (const auto& c : counterexamples) out << "\n  " << c;
  return out.str();
}

ir::StructureHook structure_hook(const RetrieveRelation& r, const ChartDef& c) {
  return [r, c](const Expr& e, const ImplState& cs) -> std::optional<Value> {
    switch (e.kind) {
      case ExprKind::Status: {
        const Expr* s = e.a.get();
        if (s && s->kind == ExprKind::StructIdent) s = s->a.get();
        if (!s || s->kind != ExprKind::StateRef) return std::nullopt;
        const StatusFormula* f = r.formula(s->name);
        if (!f) return std::nullopt;
        return Value::boolean(f->holds(cs));
      }
      case ExprKind::HistoryIs: {
        auto it = r.history_map.find(e.name);
        if (it == r.history_map.end()) return Value::boolean(false);
        const std::int64_t v = cs.get(it->second.field).as_int();
        auto code = it->second.codes.find(v);
        return Value::boolean(code != it->second.codes.end() && code->second == e.field);
      }
      case ExprKind::EventLit: return Value::integer(c.event_index(e.name));
      default: return std::nullopt;
    }
  };
}

std::string to_json(const RetrieveRelation& r) {
  nlohmann::ordered_json j;
  j["chart"] = r.chart;
  auto& st = j["status"] = nlohmann::ordered_json::array();
  for (const auto& [id, f] : r.status_formulas) {
    nlohmann::ordered_json e;
    e["state"] = id;
    e["kind"] = f.kind == FormulaKind::ActiveFlag ? "active_flag" : "substate_code";
    e["field"] = f.field;
    if (f.kind == FormulaKind::SubstateCode) {
      e["constant"] = f.constant;
      e["value"] = f.value;
    }
    st.push_back(e);
  }
  auto& vars = j["vars"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.var_map) vars[k] = v;
  if (r.history_map.empty()) {
    j["history"] = "empty";
  } else {
    auto& h = j["history"] = nlohmann::ordered_json::object();
    for (const auto& [id, enc] : r.history_map) {
      auto& e = h[id];
      e["field"] = enc.field;
      auto& codes = e["codes"] = nlohmann::ordered_json::object();
      for (const auto& [v, k] : enc.codes) codes[std::to_string(v)] = k;
    }
  }
  auto& inv = j["invariant"] = nlohmann::ordered_json::array();
  for (const auto& rc : r.concrete_invariant) inv.push_back({{"field", rc.field}, {"values", rc.values}});
  return j.dump(2);
}

std::string render(const RetrieveRelation& r) {
  std::ostringstream out;
  out << "RetrieveFunction " << r.chart << "\n";
  out << "  state_status =\n";
  for (const auto& [id, f] : r.status_formulas) out << "    " << id << " : " << f.str() << "\n";
  for (const auto& [k, v] : r.var_map) out << "  " << k << " = " << v << "\n";
  if (r.history_map.empty()) {
    out << "  state_history = {}\n";
  } else {
    for (const auto& [id, enc] : r.history_map) {
      out << "  state_history(" << id << ") =";
      for (const auto& [v, k] : enc.codes) out << ' ' << k << " if " << enc.field << " == " << v << ';';
      out << " undefined if " << enc.field << " == 0\n";
    }
  }
  out << "Invariant\n";
  for (const auto& rc : r.concrete_invariant) out << "  " << rc.str() << "\n";
  return out.str();
}

}  // namespace sfv::retrieve
