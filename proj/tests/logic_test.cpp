#include <gtest/gtest.h>

#include "sfverify/logic.hpp"
#include "sfverify/simplify.hpp"
#include "support.hpp"

namespace {

using namespace sfv;
using logic::Truth;

const std::string kRecords = R"(program T;
record DWork { is_active_c1 : byte; is_c1 : byte; }
record U { u : int; v : int; }
record Y { y : int; }
const IN_P = 1;
const IN_N = 2;
)";

ExprPtr guard(const std::string& text) {
  const auto p = sfv::testing::program_from(kRecords + "function output(tid) {\n  if (" + text + ") {\n    Y.y = 1;\n  }\n}\n");
  const auto& body = p.function("output")->body;
  return body->body[0]->arms[0].guard;
}

StmtPtr body(const std::string& text) {
  return sfv::testing::program_from(kRecords + "function output(tid) {\n" + text + "}\n").function("output")->body;
}

logic::Domain domain(bool resolve = false) {
  logic::Domain d;
  d.finite["DWork.is_c1"] = {0, 1, 2};
  d.finite["DWork.is_active_c1"] = {0, 1};
  d.finite["tid"] = {0};
  d.sorts = {{"DWork.is_c1", Sort::Byte}, {"DWork.is_active_c1", Sort::Byte}, {"U.u", Sort::Int}, {"U.v", Sort::Int}};
  d.constants = {{"IN_P", 1}, {"IN_N", 2}};
  d.resolve_constants = resolve;
  return d;
}

std::string canon(const std::string& g, bool resolve = false) { return print(logic::canon(guard(g), domain(resolve))); }

TEST(Canon, CBooleanIdiomIsRemoved) { EXPECT_EQ(canon("(U.u < 0) != 0"), "U.u < 0"); }

TEST(Canon, DoubleNegationOfComparison) { EXPECT_EQ(canon("!(!(U.u >= 0))"), "U.u >= 0"); }

TEST(Canon, NegationPushedToAtoms) { EXPECT_EQ(canon("!(U.u < 0 && U.v == 1)"), "U.u >= 0 || U.v != 1"); }

TEST(Canon, ConstantMovesRight) { EXPECT_EQ(canon("0 > U.u"), "U.u < 0"); }

TEST(Canon, ByteSignTestBecomesNotEqualZero) { EXPECT_EQ(canon("DWork.is_active_c1 > 0"), "DWork.is_active_c1 != 0"); }

TEST(Canon, NonBooleanBecomesNotEqualZero) { EXPECT_EQ(canon("U.u"), "U.u != 0"); }

TEST(Canon, ConstantsResolvedOnRequest) {
  EXPECT_EQ(canon("DWork.is_c1 == IN_P"), "DWork.is_c1 == IN_P");
  EXPECT_EQ(canon("DWork.is_c1 == IN_P", true), "DWork.is_c1 == 1");
}

TEST(Canon, LiteralArithmeticFolds) { EXPECT_EQ(canon("U.u < 2 + 3"), "U.u < 5"); }

TEST(Negate, FlipsComparison) { EXPECT_EQ(print(logic::negate(guard("U.u >= 0"), domain())), "U.u < 0"); }

TEST(Satisfiable, ContradictoryBounds) {
  const auto d = domain();
  EXPECT_FALSE(logic::satisfiable({guard("U.u < 0"), guard("U.u >= 0")}, d));
  EXPECT_TRUE(logic::satisfiable({guard("U.u < 3"), guard("U.u > 1")}, d));
}

TEST(Satisfiable, IntegerTightening) {
  EXPECT_FALSE(logic::satisfiable({guard("U.u < 2"), guard("U.u > 1")}, domain()));
}

TEST(Satisfiable, FiniteDomainExhausted) {
  EXPECT_FALSE(logic::satisfiable({guard("DWork.is_c1 != 0"), guard("DWork.is_c1 != 1"), guard("DWork.is_c1 != 2")},
                                  domain()));
}

TEST(Satisfiable, DisjunctionNeedsOneBranch) {
  EXPECT_TRUE(logic::satisfiable({guard("U.u < 0 || U.v > 0"), guard("U.u >= 0")}, domain()));
}

TEST(Decide, FiniteDomainForcesLastCode) {
  const auto d = domain(true);
  EXPECT_EQ(logic::decide({guard("DWork.is_c1 != IN_P"), guard("DWork.is_c1 != IN_N")}, guard("DWork.is_c1 == 0"), d),
            Truth::True);
}

TEST(Decide, ImpliedAndRefuted) {
  const auto d = domain();
  EXPECT_EQ(logic::decide({guard("U.u < 0")}, guard("U.u < 5"), d), Truth::True);
  EXPECT_EQ(logic::decide({guard("U.u < 0")}, guard("U.u >= 0"), d), Truth::False);
  EXPECT_EQ(logic::decide({guard("U.u < 0")}, guard("U.v < 0"), d), Truth::Unknown);
}

TEST(Decide, ByteFieldsAreNonNegative) {
  EXPECT_EQ(logic::decide({}, guard("DWork.is_active_c1 >= 0"), domain()), Truth::True);
}

TEST(Reads, CollectsFieldsAndParams) {
  EXPECT_EQ(logic::reads(guard("U.u + tid < DWork.is_c1")), (std::set<std::string>{"DWork.is_c1", "U.u", "tid"}));
}

TEST(ConstantValue, LiteralAndNamed) {
  const auto d = domain();
  EXPECT_EQ(logic::constant_value(guard("IN_N"), d), Value::integer(2));
  EXPECT_FALSE(logic::constant_value(guard("U.u"), d).has_value());
}

TEST(SimplifyStmt, InfeasibleArmIsPruned) {
  const auto s = body(R"(  if (U.u < 0) {
    if (U.u >= 0) {
      Y.y = 1;
    } else {
      Y.y = 2;
    }
  }
)");
  const auto out = refine::simplify_stmt(s, domain());
  EXPECT_EQ(print(out), "if (U.u < 0) {\n  Y.y = 2;\n}\n");
}

TEST(SimplifyStmt, GuardOverFiniteFieldSplitsIntoCodes) {
  const auto s = body(R"(  if (DWork.is_c1 != 0) {
    Y.y = 1;
  }
)");
  auto d = domain();
  d.labels["DWork.is_c1"] = {{1, "IN_P"}, {2, "IN_N"}};
  std::vector<std::string> log;
  const auto out = refine::simplify_stmt(s, d, {}, &log);
  EXPECT_EQ(print(out), "if (DWork.is_c1 == IN_N) {\n  Y.y = 1;\n} else if (DWork.is_c1 == IN_P) {\n  Y.y = 1;\n}\n");
  EXPECT_FALSE(log.empty());
}

TEST(SimplifyStmt, NormalizeTurnsImpliedFinalArmIntoElse) {
  const auto s = body(R"(  if (U.u < 0) {
    Y.y = 1;
  } else if (U.u >= 0) {
    Y.y = 2;
  }
)");
  refine::SimplifyOptions opt;
  opt.normalize = true;
  EXPECT_EQ(print(refine::simplify_stmt(s, domain(), opt)), "if (U.u < 0) {\n  Y.y = 1;\n} else {\n  Y.y = 2;\n}\n");
}

TEST(SimplifyStmt, AssignmentPropagatesIntoLaterGuard) {
  const auto s = body(R"(  DWork.is_c1 = IN_P;
  if (DWork.is_c1 == IN_P) {
    Y.y = 1;
  } else {
    Y.y = 2;
  }
)");
  EXPECT_EQ(print(refine::simplify_stmt(s, domain(true))), "DWork.is_c1 = 1;\nY.y = 1;\n");
}

}  // namespace
