#pragma once

#include <string>
#include <vector>

#include "sfverify/derive.hpp"
#include "sfverify/reference_gen.hpp"
#include "sfverify/retrieve.hpp"
#include "sfverify/simplify.hpp"
#include "support.hpp"

namespace sfv::testing {

struct Setup {
  chart::ChartDef c;
  ir::ImplProgram p;
  retrieve::RetrieveRelation r;
};

inline Setup generated(const std::string& name) {
  Setup s{corpus_chart(name), {}, {}};
  s.p = ir::generate_reference(s.c).get();
  s.r = retrieve::synthesize(s.c, s.p).get();
  return s;
}

// The exhaustive small-domain states: every invariant-respecting control
// state times every assignment of {-1, 0, 1} to the mapped data fields.
inline std::vector<ir::ImplState> small_states(const Setup& s) {
  std::vector<ir::ImplState> out;
  std::vector<std::string> data;
  for (const auto& [v, key] : s.r.var_map) data.push_back(key);
  for (const auto& cs : retrieve::control_states(s.r)) {
    auto base = ir::Interpreter(s.p).zero();
    for (const auto& [k, v] : cs) base.fields[k] = Value::integer(v);
    if (!sem::check_invariants(s.c, retrieve::abstract(s.r, base)).empty()) continue;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < data.size(); ++i) combos *= 3;
    for (std::size_t n = 0; n < combos; ++n) {
      auto st = base;
      std::size_t k = n;
      for (const auto& key : data) {
        st.fields[key] = Value::integer(static_cast<std::int64_t>(k % 3) - 1);
        k /= 3;
      }
      out.push_back(st);
    }
  }
  return out;
}

inline std::vector<sem::StepInput> small_inputs(const chart::ChartDef& c) {
  std::vector<std::string> ins;
  std::vector<std::string> evs;
  for (const auto& d : c.data)
    if (d.kind == chart::DataKind::Input) ins.push_back(d.name);
  for (const auto& e : c.events)
    if (e.kind == chart::EventKind::Input) evs.push_back(e.name);
  std::vector<sem::StepInput> out;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < ins.size(); ++i) combos *= 3;
  for (std::size_t n = 0; n < combos; ++n) {
    sem::StepInput in;
    std::size_t k = n;
    for (const auto& name : ins) {
      in.inputs[name] = Value::integer(static_cast<std::int64_t>(k % 3) - 1);
      k /= 3;
    }
    out.push_back(in);
    for (const auto& e : evs) {
      auto with = in;
      with.active_events = {e};
      out.push_back(with);
    }
  }
  return out;
}

struct Tally {
  std::size_t checks = 0;
  std::size_t discrepancies = 0;
};

/// The derived step before and after simplification, run from every small
/// state with every event id.
inline Tally simplify_discrepancies(const Setup& s) {
  auto raw = refine::derive_step(s.c, s.r, s.p);
  raw.install();
  const auto simp = refine::simplify(raw, s.c, s.r);
  const ir::Interpreter before(raw.program, retrieve::structure_hook(s.r, s.c));
  const ir::Interpreter after(simp.program);
  const auto out_fn = s.p.output_function();
  std::vector<std::int64_t> tids{0};
  for (const auto& [name, v] : s.p.constants)
    if (name.rfind("EV_", 0) == 0) tids.push_back(v);
  Tally t;
  for (const auto& st : small_states(s))
    for (const auto tid : tids) {
      auto a = st;
      auto b = st;
      before.call(a, out_fn, {Value::integer(tid)});
      after.call(b, out_fn, {Value::integer(tid)});
      ++t.checks;
      if (!(a == b)) ++t.discrepancies;
    }
  return t;
}

/// One derived step against one chart step, compared through the relation.
inline Tally derived_discrepancies(const Setup& s) {
  const auto d = refine::simplify(refine::derive_step(s.c, s.r, s.p), s.c, s.r);
  Tally t;
  for (const auto& st : small_states(s))
    for (const auto& in : small_inputs(s.c)) {
      const auto next = ir::impl_step(d.program, st, in);
      const auto expect = sem::step(s.c, retrieve::abstract(s.r, st), in);
      ++t.checks;
      if (retrieve::abstract(s.r, next.state) != expect.state || next.outputs != expect.outputs) ++t.discrepancies;
    }
  return t;
}

}  // namespace sfv::testing
