#include <gtest/gtest.h>

#include "sfverify/reference_gen.hpp"
#include "sfverify/retrieve.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using retrieve::FormulaKind;
using sfv::testing::corpus_c;
using sfv::testing::corpus_chart;

struct Fixture {
  chart::ChartDef c;
  ir::ImplProgram p;
  retrieve::RetrieveRelation r;
};

Fixture generated(const std::string& name) {
  Fixture f{corpus_chart(name), {}, {}};
  f.p = ir::generate_reference(f.c).get();
  f.r = retrieve::synthesize(f.c, f.p).get();
  return f;
}

ir::ImplState concrete(const ir::ImplProgram& p, std::map<std::string, std::int64_t> set) {
  auto s = ir::Interpreter(p).zero();
  for (const auto& [k, v] : set) s.fields[k] = Value::integer(v);
  return s;
}

std::vector<Value> small_domain() { return {Value::integer(-1), Value::integer(0), Value::integer(1)}; }

TEST(Synthesize, AbsoluteValueRelationIsExact) {
  const auto f = generated("AbsoluteValue");
  const auto& r = f.r;
  ASSERT_EQ(r.status_formulas.size(), 3u);
  EXPECT_EQ(r.status_formulas[0].first, "AbsoluteValue");
  EXPECT_EQ(r.status_formulas[0].second.kind, FormulaKind::ActiveFlag);
  EXPECT_EQ(r.status_formulas[0].second.field, "DWork.is_active_c1");
  EXPECT_EQ(r.formula("P")->kind, FormulaKind::SubstateCode);
  EXPECT_EQ(r.formula("P")->str(), "DWork.is_c1 == IN_P");
  EXPECT_EQ(r.formula("N")->str(), "DWork.is_c1 == IN_N");
  EXPECT_EQ(r.formula("P")->value, 1);
  EXPECT_EQ(r.formula("N")->value, 2);
  EXPECT_EQ(r.var_map, (std::map<std::string, std::string>{{"v_u", "U.u"}, {"v_y", "B.y"}}));
  EXPECT_TRUE(r.history_map.empty());
  ASSERT_EQ(r.concrete_invariant.size(), 1u);
  EXPECT_EQ(r.concrete_invariant[0].field, "DWork.is_c1");
  EXPECT_EQ(r.concrete_invariant[0].values, (std::vector<std::int64_t>{0, 1, 2}));
}

TEST(Synthesize, HandWrittenCGivesTheSameRelation) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto a = retrieve::to_json(retrieve::synthesize(c, corpus_c("AbsoluteValue")).get());
  const auto b = retrieve::to_json(generated("AbsoluteValue").r);
  EXPECT_EQ(a, b);
}

TEST(Synthesize, MissingSubstateFieldIsAConformanceFailure) {
  const auto c = corpus_chart("AbsoluteValue");
  auto p = ir::generate_reference(c).get();
  p.dwork.fields.erase(p.dwork.fields.begin() + 1);
  const auto r = retrieve::synthesize(c, p);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].message.rfind("conformance failure: missing field DWork.is_c1", 0), 0u)
      << r.diagnostics[0].message;
}

TEST(Synthesize, HistoryGetsEncoding) {
  const auto f = generated("History");
  ASSERT_EQ(f.r.history_map.count("Running"), 1u);
  const auto& enc = f.r.history_map.at("Running");
  EXPECT_EQ(enc.field, "DWork.was_Running");
  EXPECT_EQ(enc.codes.size(), 3u);
}

TEST(Synthesize, ParallelChildrenUseActiveFlags) {
  const auto f = generated("Parallel");
  EXPECT_EQ(f.r.formula("Heater")->kind, FormulaKind::ActiveFlag);
  EXPECT_EQ(f.r.formula("Counter")->field, "DWork.is_active_Counter");
  EXPECT_EQ(f.r.formula("Off")->field, "DWork.is_Heater");
}

TEST(Abstract, ActiveInP) {
  const auto f = generated("AbsoluteValue");
  const auto a = retrieve::abstract(f.r, concrete(f.p, {{"DWork.is_active_c1", 1}, {"DWork.is_c1", 1}, {"U.u", -4}, {"B.y", 7}}));
  EXPECT_EQ(a.state_status, (std::map<std::string, bool>{{"AbsoluteValue", true}, {"N", false}, {"P", true}}));
  EXPECT_EQ(a.vars.at("u"), Value::integer(-4));
  EXPECT_EQ(a.vars.at("y"), Value::integer(7));
  EXPECT_TRUE(a.state_history.empty());
}

TEST(Abstract, InactiveChart) {
  const auto f = generated("AbsoluteValue");
  const auto a = retrieve::abstract(f.r, concrete(f.p, {}));
  for (const auto& [id, on] : a.state_status) EXPECT_FALSE(on) << id;
}

TEST(Abstract, CodeOutsideInvariantIsAnError) {
  const auto f = generated("AbsoluteValue");
  const auto bad = concrete(f.p, {{"DWork.is_active_c1", 1}, {"DWork.is_c1", 3}});
  EXPECT_THROW(retrieve::abstract(f.r, bad), retrieve::AbstractionError);
  EXPECT_EQ(retrieve::invariant_violations(f.r, bad).size(), 1u);
}

TEST(Abstract, InitialConcreteStateMapsToInitialChartState) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto f = generated(name);
    const auto a = retrieve::abstract(f.r, ir::Interpreter(f.p).initial());
    EXPECT_EQ(a, sem::init_state(f.c)) << name;
  }
}

TEST(Properties, AbsoluteValueHasNoCounterexamples) {
  const auto f = generated("AbsoluteValue");
  const auto rep = retrieve::check_functional_total_surjective(f.r, f.c, f.p, small_domain());
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.counterexamples.empty());
  EXPECT_EQ(rep.control_states, 6u);
  EXPECT_EQ(rep.data_points, 9u);
  EXPECT_EQ(rep.checks, 54u);
}

TEST(Properties, EveryCorpusChartHasNoCounterexamples) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto f = generated(name);
    const auto rep = retrieve::check_functional_total_surjective(f.r, f.c, f.p, {Value::integer(0), Value::integer(1)});
    EXPECT_TRUE(rep.ok()) << name << "\n" << rep.str();
  }
}

TEST(Properties, DuplicateFormulaBreaksFunctionality) {
  auto f = generated("AbsoluteValue");
  f.r.status_formulas.push_back({"P", {FormulaKind::SubstateCode, "DWork.is_c1", "IN_N", 2}});
  const auto rep = retrieve::check_functional_total_surjective(f.r, f.c, f.p, small_domain());
  EXPECT_FALSE(rep.functional);
  EXPECT_FALSE(rep.counterexamples.empty());
}

TEST(Properties, NarrowedInvariantLosesSurjectivity) {
  auto f = generated("AbsoluteValue");
  f.r.concrete_invariant[0].values = {0, 1};
  const auto rep = retrieve::check_functional_total_surjective(f.r, f.c, f.p, small_domain());
  EXPECT_FALSE(rep.surjective);
}

TEST(Framing, ConcreteStepsCommuteWithAbstractSteps) {
  for (const char* name : {"AbsoluteValue", "History"}) {
    const auto f = generated(name);
    for (const auto& cs_fields : retrieve::control_states(f.r)) {
      auto cs = ir::Interpreter(f.p).zero();
      for (const auto& [k, v] : cs_fields) cs.fields[k] = Value::integer(v);
      const auto a = retrieve::abstract(f.r, cs);
      if (!sem::check_invariants(f.c, a).empty()) continue;
      for (std::int64_t v : {-1, 0, 1}) {
        sem::StepInput in;
        for (const auto& d : f.c.data)
          if (d.kind == chart::DataKind::Input) in.inputs[d.name] = Value::integer(v);
        const auto concrete_next = ir::impl_step(f.p, cs, in);
        const auto abstract_next = sem::step(f.c, a, in);
        EXPECT_EQ(retrieve::abstract(f.r, concrete_next.state), abstract_next.state) << name;
        EXPECT_EQ(concrete_next.outputs, abstract_next.outputs) << name;
      }
    }
  }
}

TEST(Render, JsonListsFormulasInChartOrder) {
  const auto j = retrieve::to_json(generated("AbsoluteValue").r);
  EXPECT_LT(j.find("\"AbsoluteValue\""), j.find("\"P\""));
  EXPECT_LT(j.find("\"P\""), j.find("\"N\""));
}

}  // namespace
