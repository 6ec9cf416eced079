#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sfverify/cosim.hpp"
#include "sfverify/derive.hpp"
#include "sfverify/match.hpp"
#include "sfverify/mutate.hpp"
#include "sfverify/reference_gen.hpp"
#include "sfverify/retrieve.hpp"
#include "sfverify/simplify.hpp"
#include "sfverify/trace_io.hpp"
#include "sfverify/verify.hpp"
#include "exhaustive.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using refine::Outcome;
using sfv::testing::corpus_c;
using sfv::testing::corpus_chart;
using sfv::testing::generated;
using sfv::testing::small_inputs;
using sfv::testing::small_states;

refine::VerifyOptions quick(std::size_t traces = 200) {
  refine::VerifyOptions o;
  o.traces.count = traces;
  o.traces.max_len = 30;
  return o;
}

ir::ImplProgram edit_output(ir::ImplProgram p, const std::function<StmtPtr(const StmtPtr&)>& f) {
  auto& fn = p.functions.at(p.output_function());
  fn.body = f(fn.body);
  return p;
}

TEST(Derive, AbsoluteValueUnfoldsIntoOneConditional) {
  const auto s = generated("AbsoluteValue");
  const auto d = refine::derive_step(s.c, s.r, s.p);
  ASSERT_NE(d.step_body, nullptr);
  EXPECT_FALSE(d.simplified);
  EXPECT_EQ(d.program.output_function(), "AbsoluteValue_output");
  std::set<int> phases;
  for (const auto& e : d.phase_log) phases.insert(e.phase);
  EXPECT_EQ(phases, (std::set<int>{1, 2, 3}));
  EXPECT_TRUE(ir::check_program(d.program, true).empty());
}

TEST(Derive, SimplifyRemovesStructureLookups) {
  const auto s = generated("Hierarchy");
  const auto d = refine::simplify(refine::derive_step(s.c, s.r, s.p), s.c, s.r);
  EXPECT_TRUE(d.simplified);
  EXPECT_TRUE(ir::check_program(d.program).empty());
  EXPECT_EQ(d.phase_log.back().phase, 4);
}

TEST(Derive, AbsoluteValueTopLevels) {
  const auto s = generated("AbsoluteValue");
  auto d = refine::simplify(refine::derive_step(s.c, s.r, s.p), s.c, s.r);
  const auto m = refine::structure_match(d, s.p, s.c, s.r);
  ASSERT_TRUE(m.matched);
  const auto prog = sfv::testing::program_from(
                         "program X;\nrecord DWork { is_active_c1 : byte; is_c1 : byte; }\nrecord U { u : int; }\n"
                         "record B { y : int; }\nrecord Y { y : int; }\nconst IN_N = 2;\nconst IN_P = 1;\n"
                         "function output(tid) {\n" + m.derived_normal + "}\n");
  const auto& body = prog.function("output")->body;
  const auto& top = *body->body[0];
  ASSERT_EQ(top.kind, StmtKind::If);
  ASSERT_EQ(top.arms.size(), 3u);
  EXPECT_EQ(print(top.arms[0].guard), "DWork.is_active_c1 == 0");
  EXPECT_EQ(print(top.arms[1].guard), "DWork.is_c1 == 2");
  EXPECT_EQ(print(top.arms[2].guard), "DWork.is_c1 == 1");
  EXPECT_EQ(print(top.arms[1].body->body[0]->arms[0].guard), "U.u >= 0");
  EXPECT_EQ(print(top.arms[2].body->body[0]->arms[0].guard), "U.u < 0");
  EXPECT_EQ(top.else_body, nullptr);
}

TEST(Simplify, PreAndPostSimplifyAgreeOnSmallDomains) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto n = sfv::testing::simplify_discrepancies(generated(name));
    EXPECT_GT(n.checks, 0u) << name;
    EXPECT_EQ(n.discrepancies, 0u) << name;
  }
}

TEST(Simplify, DerivedAgreesWithChartSemanticsThroughRetrieve) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto n = sfv::testing::derived_discrepancies(generated(name));
    EXPECT_GT(n.checks, 0u) << name;
    EXPECT_EQ(n.discrepancies, 0u) << name;
  }
}

TEST(Match, GeneratedCorpusMatches) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto s = generated(name);
    const auto d = refine::simplify(refine::derive_step(s.c, s.r, s.p), s.c, s.r);
    const auto m = refine::structure_match(d, s.p, s.c, s.r);
    EXPECT_TRUE(m.matched) << name << (m.divergence ? "\n" + m.divergence->reason : "");
  }
}

TEST(Match, WrongSignDivergesAtTheAssignment) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto p = corpus_c("AbsoluteValue_wrongsign");
  const auto r = retrieve::synthesize(c, p).get();
  const auto m = refine::structure_match(refine::simplify(refine::derive_step(c, r, p), c, r), p, c, r);
  ASSERT_FALSE(m.matched);
  ASSERT_TRUE(m.divergence.has_value());
  EXPECT_EQ(m.divergence->derived, "B.y = U.u;");
  EXPECT_EQ(m.divergence->implementation, "B.y = -U.u;");
}

TEST(Match, HandEditedReorderMatchesOnlyWhenNormalized) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto p = corpus_c("AbsoluteValue_handedit");
  const auto r = retrieve::synthesize(c, p).get();
  const auto d = refine::simplify(refine::derive_step(c, r, p), c, r);
  const auto normal = refine::structure_match(d, p, c, r, refine::MatchMode::Normalized);
  EXPECT_TRUE(normal.matched);
  EXPECT_FALSE(normal.reorders.empty());
  const auto exact = refine::structure_match(d, p, c, r, refine::MatchMode::Exact);
  EXPECT_FALSE(exact.matched);
}

TEST(Match, RecursionIsAPatternError) {
  const auto s = generated("AbsoluteValue");
  auto p = edit_output(s.p, [&](const StmtPtr& b) { return sequence({b, Stmt::call(s.p.output_function(), {Expr::param("tid")})}); });
  const auto d = refine::simplify(refine::derive_step(s.c, s.r, s.p), s.c, s.r);
  EXPECT_THROW(refine::structure_match(d, p, s.c, s.r), refine::PatternError);
}

TEST(Cosim, GeneratedCorpusIsClean) {
  refine::TraceConfig cfg;
  cfg.count = 300;
  cfg.max_len = 40;
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto s = generated(name);
    const auto rep = refine::cosimulate(s.c, s.p, s.r, cfg);
    EXPECT_EQ(rep.traces, 300u);
    EXPECT_TRUE(rep.clean()) << name << " " << rep.counterexample->mismatch.what;
  }
}

TEST(Cosim, TracesRespectConfig) {
  const auto c = corpus_chart("History");
  refine::TraceConfig cfg;
  cfg.max_len = 12;
  cfg.lo = -2;
  cfg.hi = 4;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto t = refine::generate_trace(c, cfg, i);
    ASSERT_GE(t.size(), 1u);
    ASSERT_LE(t.size(), 12u);
    for (const auto& in : t) {
      const auto v = in.inputs.at("load").as_int();
      ASSERT_TRUE(v >= -2 && v <= 4);
    }
  }
  EXPECT_EQ(sem::format_trace(refine::generate_trace(c, cfg, 5)),
            sem::format_trace(refine::generate_trace(c, cfg, 5)));
}

TEST(Cosim, WrongSignIsCaughtAndShrunk) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto p = corpus_c("AbsoluteValue_wrongsign");
  const auto r = retrieve::synthesize(c, p).get();
  refine::TraceConfig cfg;
  cfg.count = 200;
  const auto rep = refine::cosimulate(c, p, r, cfg);
  EXPECT_GT(rep.violations, 0u);
  ASSERT_TRUE(rep.counterexample.has_value());
  EXPECT_LE(rep.counterexample->trace.size(), 5u);
  EXPECT_TRUE(refine::check_trace(c, p, r, rep.counterexample->trace).has_value());
}

TEST(Cosim, WorkerCountDoesNotChangeTheReport) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto p = corpus_c("AbsoluteValue_wrongsign");
  const auto r = retrieve::synthesize(c, p).get();
  refine::TraceConfig one;
  one.count = 150;
  auto four = one;
  four.workers = 4;
  const auto a = refine::cosimulate(c, p, r, one);
  const auto b = refine::cosimulate(c, p, r, four);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.counterexample->trace_index, b.counterexample->trace_index);
  EXPECT_EQ(a.counterexample->trace.size(), b.counterexample->trace.size());
}

TEST(Mutate, AtLeastTwentyMutantsAndNoneSurvives) {
  const auto s = generated("AbsoluteValue");
  const auto ms = refine::mutants(s.p);
  ASSERT_GE(ms.size(), 20u);
  std::set<std::string> ids;
  std::set<refine::MutationKind> kinds;
  for (const auto& m : ms) {
    ids.insert(m.id);
    kinds.insert(m.kind);
    const auto v = refine::verify(s.c, m.program, quick());
    EXPECT_NE(v.outcome, Outcome::Pass) << m.id << ": " << m.description;
    if (v.cosim && v.cosim->counterexample) EXPECT_LE(v.cosim->counterexample->trace.size(), 5u) << m.id;
  }
  EXPECT_EQ(ids.size(), ms.size());
  EXPECT_EQ(kinds.size(), 4u);
}

TEST(Mutate, DroppingActivationGivesShortCounterexample) {
  const auto s = generated("AbsoluteValue");
  for (const auto& m : refine::mutants(s.p)) {
    if (m.description.find("is_active_c1 = 1") == std::string::npos) continue;
    const auto v = refine::verify(s.c, m.program, quick());
    EXPECT_EQ(v.outcome, Outcome::Fail);
    ASSERT_TRUE(v.cosim && v.cosim->counterexample);
    EXPECT_LE(v.cosim->counterexample->trace.size(), 2u);
    return;
  }
  FAIL() << "no activation mutant";
}

TEST(Verify, GeneratedCorpusPasses) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto s = generated(name);
    const auto v = refine::verify(s.c, s.p, quick());
    EXPECT_EQ(v.outcome, Outcome::Pass) << name << " " << v.phase;
  }
}

TEST(Verify, HandEditPassesWrongSignFails) {
  const auto c = corpus_chart("AbsoluteValue");
  EXPECT_EQ(refine::verify(c, corpus_c("AbsoluteValue_handedit"), quick()).outcome, Outcome::Pass);
  const auto v = refine::verify(c, corpus_c("AbsoluteValue_wrongsign"), quick());
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_EQ(v.phase, "match");
  ASSERT_TRUE(v.first_divergence.has_value());
}

TEST(Verify, MissingFieldIsNonconformant) {
  const auto c = corpus_chart("AbsoluteValue");
  auto p = ir::generate_reference(c).get();
  p.dwork.fields.pop_back();
  const auto v = refine::verify(c, p, quick());
  EXPECT_EQ(v.outcome, Outcome::Nonconformant);
  EXPECT_FALSE(v.diagnostics.empty());
}

TEST(Verify, JsonIsDeterministic) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto p = corpus_c("AbsoluteValue_wrongsign");
  const auto opt = quick(300);
  EXPECT_EQ(refine::to_json(refine::verify(c, p, opt), opt), refine::to_json(refine::verify(c, p, opt), opt));
}

TEST(Verify, PhaseLogCoversAllPhases) {
  const auto s = generated("AbsoluteValue");
  const auto v = refine::verify(s.c, s.p, quick());
  std::set<int> phases;
  for (const auto& e : v.phase_log) phases.insert(e.phase);
  EXPECT_EQ(phases, (std::set<int>{1, 2, 3, 4, 5}));
}

}  // namespace
