#include <gtest/gtest.h>

#include "sfverify/chart_dsl.hpp"
#include "sfverify/chart_validate.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using sfv::testing::chart_from;
using sfv::testing::corpus_chart;

std::vector<std::string> messages(const Diagnostics& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.message);
  return out;
}

TEST(ParseChart, AbsoluteValueHasTwoStatesTwoJunctionsSixTransitions) {
  const auto c = corpus_chart("AbsoluteValue");
  EXPECT_EQ(c.identifier, "AbsoluteValue");
  EXPECT_EQ(c.states.size(), 2u);
  EXPECT_EQ(c.junctions.size(), 2u);
  EXPECT_EQ(c.transitions.size(), 6u);
  EXPECT_EQ(c.child_order, (std::vector<std::string>{"P", "N"}));
  EXPECT_EQ(c.defaults(c.identifier).size(), 1u);
  ASSERT_NE(c.find_data("u"), nullptr);
  EXPECT_EQ(c.find_data("u")->kind, chart::DataKind::Input);
  EXPECT_EQ(c.find_data("y")->kind, chart::DataKind::Output);
  EXPECT_EQ(print(c.state("P").during, PrintStyle::Chart), "y := u;\n");
}

TEST(ParseChart, EmptyBodyWithOneInput) {
  const auto c = chart_from("chart E { input u : int; }");
  EXPECT_TRUE(c.states.empty());
  EXPECT_EQ(c.data.size(), 1u);
}

TEST(ParseChart, UnknownTargetIsReported) {
  auto r = chart::parse_chart(R"(chart X {
    state A { }
    transition t0 { source none; target A; }
    transition t1 { source A; target Nowhere; }
  })");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].message, "unknown target 'Nowhere'");
  EXPECT_EQ(r.diagnostics[0].loc.line, 4);
}

TEST(ParseChart, DuplicateIdentifierAndUnknownVariableAreBothCollected) {
  auto r = chart::parse_chart(R"(chart X {
    input u : int;
    state u { during { z := 1; } }
  })");
  ASSERT_FALSE(r.ok());
  const auto m = messages(r.diagnostics);
  EXPECT_NE(std::find(m.begin(), m.end(), "duplicate identifier 'u'"), m.end());
  EXPECT_EQ(m.size(), 2u);
}

TEST(ParseChart, BindingActionIsRejectedAsUnsupported) {
  auto r = chart::parse_chart(R"(chart X {
    input u : int;
    state A { bind { u; } }
    transition t0 { source none; target A; }
  })");
  ASSERT_FALSE(r.ok());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].message, "unsupported feature: binding actions in state 'A'");
}

TEST(ParseChart, SyntaxErrorCarriesPosition) {
  auto r = chart::parse_chart("chart X {\n  state A { during { y = 1; } }\n}");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].loc.line, 2);
}

TEST(ValidateChart, AbsoluteValueIsClean) { EXPECT_TRUE(chart::validate_chart(corpus_chart("AbsoluteValue")).empty()); }

TEST(ValidateChart, EveryCorpusChartIsClean) {
  for (const char* name : sfv::testing::kCorpusCharts)
    EXPECT_TRUE(chart::validate_chart(corpus_chart(name)).empty()) << name;
}

TEST(ValidateChart, MissingDefaultTransition) {
  const auto c = chart_from(R"(chart X {
    state Run { state A { } state B { } }
    transition t0 { source none; target Run; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"missing default transition: Run"}));
}

TEST(ValidateChart, DuplicatePriority) {
  const auto c = chart_from(R"(chart X {
    input u : int;
    state P { } state N { }
    transition t0 { source none; target P; }
    transition t1 { source P; target N; cond u < 0; order 1; }
    transition t2 { source P; target N; cond u < -5; order 1; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"duplicate priority at source P"}));
}

TEST(ValidateChart, ParallelCompositeWithDefaultTransition) {
  const auto c = chart_from(R"(chart X {
    state Q { decomposition parallel; state A { } state B { }
      transition d { source none; target A; } }
    transition t0 { source none; target Q; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"default transition in parallel state: Q"}));
}

TEST(ValidateChart, HistoryOnParallelState) {
  const auto c = chart_from(R"(chart X {
    state Q { decomposition parallel; history; state A { } state B { } }
    transition t0 { source none; target Q; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"history on parallel state: Q"}));
}

TEST(ValidateChart, BroadcastOfInputEvent) {
  const auto c = chart_from(R"(chart X {
    event E : input;
    state A { entry { send E; } }
    transition t0 { source none; target A; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"broadcast of non-local event: E in A"}));
}

TEST(ValidateChart, AssignmentToInput) {
  const auto c = chart_from(R"(chart X {
    input u : int;
    state A { during { u := 1; } }
    transition t0 { source none; target A; }
  })");
  EXPECT_EQ(messages(chart::validate_chart(c)), (std::vector<std::string>{"assignment to input: u in A"}));
}

TEST(ValidateChart, DiagnosticsAreStableAcrossRuns) {
  const std::string src = R"(chart X {
    input u : int;
    state R { state A { } state B { } }
    state S { decomposition parallel; history; state C { } state D { } }
    transition t0 { source none; target R; }
    transition t1 { source R; target S; order 2; }
    transition t2 { source R; target S; order 2; }
  })";
  const auto first = join(chart::validate_chart(chart_from(src)));
  EXPECT_FALSE(first.empty());
  for (int i = 0; i < 5; ++i) EXPECT_EQ(join(chart::validate_chart(chart_from(src))), first);
}

TEST(PrintChart, RoundTripsEveryCorpusChart) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto c = corpus_chart(name);
    const std::string text = chart::print_chart(c);
    auto again = chart::parse_chart(text);
    ASSERT_TRUE(again.ok()) << name << "\n" << join(again.diagnostics);
    EXPECT_TRUE(chart::same_chart(c, *again)) << name;
    EXPECT_EQ(chart::print_chart(*again), text) << name;
  }
}

TEST(ChartDef, TransitionEndpointsResolveInCorpus) {
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto c = corpus_chart(name);
    for (const auto& [id, t] : c.transitions) {
      if (t.source) EXPECT_TRUE(c.is_state(*t.source) || c.is_junction(*t.source)) << name << " " << id;
      EXPECT_TRUE(c.is_state(t.target) || c.is_junction(t.target)) << name << " " << id;
    }
  }
}

TEST(ChartDef, OutgoingIsOrderedByPriority) {
  const auto c = chart_from(R"(chart X {
    input u : int;
    state P { } state N { }
    transition t0 { source none; target P; }
    transition late { source P; target N; cond u < -5; order 3; }
    transition early { source P; target N; cond u < 0; order 1; }
  })");
  const auto out = c.outgoing("P", "X");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0]->id, "early");
  EXPECT_EQ(out[1]->id, "late");
}

TEST(ChartDef, ChainBelowListsStatesTopDown) {
  const auto c = corpus_chart("Hierarchy");
  EXPECT_EQ(c.chain_below("Hierarchy", "Boost"), (std::vector<std::string>{"Auto", "Cruise", "Boost"}));
  EXPECT_EQ(c.chain_below("Auto", "Boost"), (std::vector<std::string>{"Cruise", "Boost"}));
  EXPECT_TRUE(c.is_descendant_or_self("Steady", "Auto"));
  EXPECT_FALSE(c.is_descendant_or_self("Manual", "Auto"));
}

}  // namespace
