#include <gtest/gtest.h>

#include <cstdlib>

#include "sfverify/chart_sem.hpp"
#include "sfverify/cosim.hpp"
#include "sfverify/trace_io.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using sem::StepInput;
using sfv::testing::chart_from;
using sfv::testing::corpus_chart;

StepInput u_is(std::int64_t u) { return StepInput{{}, {{"u", Value::integer(u)}}}; }

std::vector<std::int64_t> ys(const std::vector<sem::StepResult>& rs, const std::string& out = "y") {
  std::vector<std::int64_t> v;
  for (const auto& r : rs) v.push_back(r.outputs.at(out).as_int());
  return v;
}

TEST(InitState, AbsoluteValueAllInactiveAndZero) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto s = sem::init_state(c);
  EXPECT_EQ(s.state_status, (std::map<std::string, bool>{{"AbsoluteValue", false}, {"N", false}, {"P", false}}));
  EXPECT_TRUE(s.state_history.empty());
  EXPECT_EQ(s.vars, (std::map<std::string, Value>{{"u", Value::integer(0)}, {"y", Value::integer(0)}}));
}

TEST(InitState, EmptyChart) {
  const auto s = sem::init_state(chart_from("chart E { }"));
  EXPECT_TRUE(s.state_status.empty());
  EXPECT_TRUE(s.vars.empty());
  EXPECT_TRUE(s.state_history.empty());
}

TEST(InitState, HistoryChartRecordsNothingYet) {
  EXPECT_TRUE(sem::init_state(corpus_chart("History")).state_history.empty());
}

TEST(Step, FreshAbsoluteValueActivatesIntoPWithoutOutput) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto r = sem::step(c, sem::init_state(c), u_is(5));
  EXPECT_TRUE(r.state.active("AbsoluteValue"));
  EXPECT_TRUE(r.state.active("P"));
  EXPECT_FALSE(r.state.active("N"));
  EXPECT_EQ(r.outputs.at("y"), Value::integer(0));
}

TEST(Step, PActiveWithPositiveInputStaysAndCopies) {
  const auto c = corpus_chart("AbsoluteValue");
  auto s = sem::step(c, sem::init_state(c), u_is(5)).state;
  const auto r = sem::step(c, s, u_is(5));
  EXPECT_TRUE(r.state.active("P"));
  EXPECT_EQ(r.outputs.at("y"), Value::integer(5));
}

TEST(Step, PActiveWithNegativeInputMovesToN) {
  const auto c = corpus_chart("AbsoluteValue");
  auto s = sem::step(c, sem::init_state(c), u_is(5)).state;
  const auto r = sem::step(c, s, u_is(-3));
  EXPECT_TRUE(r.state.active("N"));
  EXPECT_FALSE(r.state.active("P"));
  const auto r2 = sem::step(c, r.state, u_is(-3));
  EXPECT_TRUE(r2.state.active("N"));
  EXPECT_EQ(r2.outputs.at("y"), Value::integer(3));
}

TEST(Step, TraceRecordsExitTakeEnter) {
  const auto c = corpus_chart("AbsoluteValue");
  auto s = sem::step(c, sem::init_state(c), u_is(5)).state;
  const auto r = sem::step(c, s, u_is(-3));
  std::vector<std::string> t;
  for (const auto& e : r.trace) t.push_back(e.str());
  EXPECT_EQ(t, (std::vector<std::string>{"exit P", "take T3", "take T4", "AbsoluteValue.transition T4", "enter N"}));
}

TEST(RunTrace, AbsoluteValueOutputs) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto rs = sem::run_trace(c, {u_is(5), u_is(5), u_is(-3), u_is(-3)});
  EXPECT_EQ(ys(rs), (std::vector<std::int64_t>{0, 5, 3, 3}));
}

TEST(RunTrace, EmptyTrace) { EXPECT_TRUE(sem::run_trace(corpus_chart("AbsoluteValue"), {}).empty()); }

TEST(RunTrace, AbsoluteValueComputesAbsoluteValueFromSecondStep) {
  const auto c = corpus_chart("AbsoluteValue");
  refine::TraceConfig cfg;
  cfg.seed = 7;
  cfg.max_len = 40;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto tr = refine::generate_trace(c, cfg, i);
    const auto rs = sem::run_trace(c, tr);
    for (std::size_t n = 1; n < rs.size(); ++n)
      ASSERT_EQ(rs[n].outputs.at("y").as_int(), std::llabs(tr[n].inputs.at("u").as_int())) << "trace " << i;
  }
}

TEST(ResolvePath, DefaultJunctionWithPositiveInputReachesP) {
  const auto c = corpus_chart("AbsoluteValue");
  auto s = sem::init_state(c);
  s.vars["u"] = Value::integer(5);
  const auto out = sem::resolve_path(c, s, "J0", std::nullopt);
  EXPECT_TRUE(out.completed);
  EXPECT_EQ(out.target, "P");
  EXPECT_EQ(out.path, (std::vector<std::string>{"T1"}));
}

TEST(ResolvePath, JunctionWithoutOutgoingTransitionsDoesNotComplete) {
  const auto c = chart_from(R"(chart X {
    state A { } junction J;
    transition t0 { source none; target A; }
    transition t1 { source A; target J; }
  })");
  auto s = sem::init_state(c);
  EXPECT_FALSE(sem::resolve_path(c, s, "J", std::nullopt).completed);
  EXPECT_FALSE(sem::resolve_path(c, s, "A", std::nullopt).completed);
}

TEST(ResolvePath, JunctionCycleIsAnError) {
  const auto c = chart_from(R"(chart X {
    state A { } junction J1; junction J2;
    transition t0 { source none; target A; }
    transition t1 { source A; target J1; }
    transition t2 { source J1; target J2; }
    transition t3 { source J2; target J1; }
  })");
  auto s = sem::init_state(c);
  try {
    sem::resolve_path(c, s, "A", std::nullopt);
    FAIL() << "expected a junction cycle";
  } catch (const sem::SemError& e) {
    EXPECT_EQ(e.kind(), sem::SemError::Kind::JunctionCycle);
  }
}

TEST(ResolvePath, ConditionActionsSurviveBacktracking) {
  const auto c = chart_from(R"(chart X {
    local k : int;
    state A { } state B { } junction J;
    transition t0 { source none; target A; }
    transition t1 { source A; target J; condition_action { k := k + 1; } }
    transition t2 { source J; target B; cond k > 5; }
  })");
  auto s = sem::init_state(c);
  EXPECT_FALSE(sem::resolve_path(c, s, "A", std::nullopt).completed);
  EXPECT_EQ(s.vars.at("k"), Value::integer(1));
}

class BroadcastChart : public ::testing::Test {
 protected:
  chart::ChartDef c = corpus_chart("Broadcast");
  sem::ChartDynState in_a() { return sem::step(c, sem::init_state(c), u_is(0)).state; }
};

TEST_F(BroadcastChart, HandlerLeavesStateActiveReturnsNormally) {
  const auto r = sem::step(c, in_a(), u_is(3));
  EXPECT_TRUE(r.state.active("B"));
  EXPECT_EQ(r.outputs.at("y"), Value::integer(101));
  EXPECT_EQ(r.outputs.at("x"), Value::integer(-1));
}

TEST_F(BroadcastChart, HandlerExitingSenderCutsEntryShort) {
  const auto r = sem::step(c, in_a(), u_is(10));
  EXPECT_TRUE(r.state.active("C"));
  EXPECT_EQ(r.outputs.at("y"), Value::integer(110));
  bool early = false;
  for (const auto& e : r.trace) early = early || e.kind == sem::TraceKind::EarlyReturn;
  EXPECT_TRUE(early);
}

TEST_F(BroadcastChart, DirectBroadcastReportsEarlyReturn) {
  auto s = in_a();
  s.state_status["A"] = false;
  s.state_status["B"] = true;
  s.vars["u"] = Value::integer(9);
  const auto out = sem::broadcast(c, s, "GO", "B");
  EXPECT_TRUE(out.early_return);
  EXPECT_TRUE(out.state.active("C"));
  s.vars["u"] = Value::integer(1);
  EXPECT_FALSE(sem::broadcast(c, s, "GO", "B").early_return);
}

TEST(Broadcast, SelfBroadcastDiverges) {
  const auto c = chart_from(R"(chart X {
    event E : local;
    state A { during { send E; } }
    transition t0 { source none; target A; }
  })");
  auto s = sem::step(c, sem::init_state(c), {}).state;
  try {
    sem::step(c, s, {});
    FAIL() << "expected divergence";
  } catch (const sem::SemError& e) {
    EXPECT_EQ(e.kind(), sem::SemError::Kind::BroadcastDivergence);
  }
}

TEST(History, ResumeReentersLastActiveChild) {
  const auto c = corpus_chart("History");
  auto load = [](std::int64_t v, std::vector<std::string> ev = {}) {
    return StepInput{std::move(ev), {{"load", Value::integer(v)}}};
  };
  const auto rs = sem::run_trace(c, {load(0), load(3), load(0, {"PAUSE"}), load(0, {"RESUME"})});
  EXPECT_EQ(ys(rs, "phase"), (std::vector<std::int64_t>{1, 2, 0, 2}));
  EXPECT_EQ(rs[2].state.state_history.at("Running"), "Rinse");
  EXPECT_TRUE(rs[3].state.active("Rinse"));
}

TEST(History, EventsRunInDeclarationOrder) {
  const auto c = corpus_chart("History");
  auto s = sem::step(c, sem::init_state(c), {{}, {{"load", Value::integer(0)}}}).state;
  const auto r = sem::step(c, s, {{"RESUME", "PAUSE"}, {{"load", Value::integer(0)}}});
  EXPECT_TRUE(r.state.active("Running"));
  EXPECT_TRUE(r.state.active("Wash"));
}

TEST(Parallel, ActivationEntersEveryRegion) {
  const auto c = corpus_chart("Parallel");
  const auto r = sem::step(c, sem::init_state(c), {{}, {{"temp", Value::integer(20)}}});
  for (const char* s : {"Sys", "Heater", "Counter", "Off", "Idle"}) EXPECT_TRUE(r.state.active(s)) << s;
  EXPECT_FALSE(r.state.active("On"));
  EXPECT_FALSE(r.state.active("Counting"));
}

TEST(Parallel, RegionsRunInChildOrder) {
  const auto c = corpus_chart("Parallel");
  const auto rs = sem::run_trace(c, {{{}, {{"temp", Value::integer(20)}}},
                                     {{}, {{"temp", Value::integer(10)}}},
                                     {{"TICK"}, {{"temp", Value::integer(10)}}}});
  EXPECT_TRUE(rs[1].state.active("On"));
  EXPECT_TRUE(rs[1].state.active("Counting"));
  EXPECT_EQ(rs[2].outputs.at("count"), Value::integer(1));
}

TEST(Invariants, HoldAfterEveryStepOfRandomCorpusTraces) {
  refine::TraceConfig cfg;
  cfg.seed = 3;
  cfg.max_len = 30;
  sem::SemOptions opt;
  opt.check_invariants = true;
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto c = corpus_chart(name);
    for (std::size_t i = 0; i < 50; ++i) {
      auto s = sem::init_state(c);
      for (const auto& in : refine::generate_trace(c, cfg, i)) {
        s = sem::step(c, s, in, opt).state;
        ASSERT_TRUE(sem::check_invariants(c, s).empty()) << name;
      }
    }
  }
}

TEST(Determinism, SameInputsSameResultIncludingTrace) {
  const auto c = corpus_chart("Hierarchy");
  refine::TraceConfig cfg;
  const auto tr = refine::generate_trace(c, cfg, 11);
  const auto a = sem::run_trace(c, tr);
  const auto b = sem::run_trace(c, tr);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].state, b[i].state);
    EXPECT_EQ(a[i].outputs, b[i].outputs);
    EXPECT_EQ(a[i].trace, b[i].trace);
  }
}

TEST(Hierarchy, EntryAndExitRunOutsideIn) {
  const auto c = corpus_chart("Hierarchy");
  auto in = [](std::int64_t speed, std::int64_t manual) {
    return StepInput{{}, {{"speed", Value::integer(speed)}, {"manual", Value::integer(manual)}}};
  };
  const auto rs = sem::run_trace(c, {in(0, 0), in(0, 0), in(3, 0), in(0, 1)});
  EXPECT_TRUE(rs[1].state.active("Idle"));
  EXPECT_TRUE(rs[2].state.active("Steady"));
  EXPECT_EQ(rs[2].outputs.at("trace_code"), Value::integer(13));
  EXPECT_TRUE(rs[3].state.active("Manual"));
  EXPECT_EQ(rs[3].outputs.at("trace_code"), Value::integer(1342));
}

TEST(TraceIo, ParsesEventsAndInputs) {
  auto t = sem::parse_trace("# comment\nevents=[PAUSE,RESUME] load=3\n\nload=-2 x=1.5\n");
  ASSERT_TRUE(t.ok());
  ASSERT_EQ(t->size(), 2u);
  EXPECT_EQ((*t)[0].active_events, (std::vector<std::string>{"PAUSE", "RESUME"}));
  EXPECT_EQ((*t)[0].inputs.at("load"), Value::integer(3));
  EXPECT_TRUE((*t)[1].active_events.empty());
  EXPECT_EQ((*t)[1].inputs.at("x"), Value::real(1.5));
  auto again = sem::parse_trace(sem::format_trace(*t));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(sem::format_trace(*again), sem::format_trace(*t));
}

TEST(TraceIo, RejectsMalformedLine) { EXPECT_FALSE(sem::parse_trace("u=\n").ok()); }

TEST(TraceIo, StepResultJsonKeyOrder) {
  const auto c = corpus_chart("AbsoluteValue");
  const auto in = u_is(5);
  const auto r = sem::step(c, sem::init_state(c), in);
  const std::string j = sem::step_result_json(0, in, r);
  EXPECT_EQ(j.rfind("{\"step\":0,\"events\":[],\"outputs\":{\"y\":0}", 0), 0u) << j;
}

}  // namespace
