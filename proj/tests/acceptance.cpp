#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

#include "exhaustive.hpp"
#include "sfverify/cosim.hpp"
#include "sfverify/mutate.hpp"
#include "sfverify/verify.hpp"

namespace {

using namespace sfv;
using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

refine::VerifyOptions trace_options() {
  refine::VerifyOptions o;
  o.traces.seed = 2024;
  o.traces.count = 10000;
  o.traces.max_len = 100;
  o.traces.lo = -10;
  o.traces.hi = 10;
  o.traces.workers = std::max(1u, std::thread::hardware_concurrency());
  return o;
}

const Stmt* only_if(const StmtPtr& s) {
  if (!s) return nullptr;
  if (s->kind == StmtKind::If) return s.get();
  if (s->kind == StmtKind::Seq && !s->body.empty() && s->body.front()->kind == StmtKind::If) return s->body.front().get();
  return nullptr;
}

Check top_levels(const refine::Verdict& v) {
  Check ck;
  const auto p = sfv::testing::program_from(
      "program X;\nrecord DWork { is_active_c1 : byte; is_c1 : byte; }\nrecord B { y : int; }\n"
      "record U { u : int; }\nrecord Y { y : int; }\nconst IN_N = 2;\nconst IN_P = 1;\n"
      "function output(tid) {\n" + v.derived_normal + "}\n");
  const Stmt* top = only_if(p.function("output")->body);
  ck.require(top && !top->arms.empty() && print(top->arms[0].guard) == "DWork.is_active_c1 == 0",
             "level 1 is not the activity test");
  if (!ck.ok) return ck;
  // The normal form may join `else { if ... }` into the activity chain.
  std::vector<Arm> dispatch(top->arms.begin() + 1, top->arms.end());
  if (dispatch.empty())
    if (const Stmt* nested = only_if(top->else_body)) dispatch = nested->arms;
  ck.require(dispatch.size() == 2, "level 2 is not a two-way dispatch");
  if (!ck.ok) return ck;
  ck.require(print(dispatch[0].guard) == "DWork.is_c1 == 2", "level 2 first arm is not is_c1 == IN_N");
  ck.require(print(dispatch[1].guard) == "DWork.is_c1 == 1", "level 2 second arm is not is_c1 == IN_P");
  for (const auto& arm : dispatch) {
    const Stmt* inner = only_if(arm.body);
    ck.require(inner && !inner->arms.empty(), "level 3 missing");
    if (!ck.ok) return ck;
    const auto g = print(inner->arms[0].guard);
    ck.require(g == "U.u < 0" || g == "U.u >= 0", "level 3 guard is " + g);
  }
  return ck;
}

Check criterion1() {
  const auto c = sfv::testing::corpus_chart("AbsoluteValue");
  const auto t0 = Clock::now();
  const auto p = ir::generate_reference(c).get();
  const auto v = refine::verify(c, p);
  const double dt = seconds_since(t0);
  Check ck;
  ck.require(v.outcome == refine::Outcome::Pass, "outcome " + refine::to_string(v.outcome));
  ck.require(dt < 1.0, "took " + std::to_string(dt) + " s");
  if (ck.ok) ck = top_levels(v);
  if (ck.ok) ck.detail = "PASS in " + std::to_string(dt) + " s";
  return ck;
}

Check criterion2() {
  const auto s = sfv::testing::generated("AbsoluteValue");
  const auto& r = s.r;
  Check ck;
  ck.require(r.status_formulas.size() == 3, "expected three status formulas");
  if (!ck.ok) return ck;
  ck.require(r.status_formulas[0].first == "AbsoluteValue" &&
                 r.status_formulas[0].second.kind == retrieve::FormulaKind::ActiveFlag &&
                 r.status_formulas[0].second.field == "DWork.is_active_c1",
             "chart formula");
  ck.require(r.formula("P") && r.formula("P")->str() == "DWork.is_c1 == IN_P", "P formula");
  ck.require(r.formula("N") && r.formula("N")->str() == "DWork.is_c1 == IN_N", "N formula");
  ck.require(r.var_map == std::map<std::string, std::string>{{"v_u", "U.u"}, {"v_y", "B.y"}}, "variable map");
  ck.require(r.history_map.empty(), "history map not empty");
  ck.require(r.concrete_invariant.size() == 1 && r.concrete_invariant[0].field == "DWork.is_c1" &&
                 r.concrete_invariant[0].values == std::vector<std::int64_t>{0, 1, 2},
             "invariant");
  const auto rep = retrieve::check_functional_total_surjective(
      r, s.c, s.p, {Value::integer(-1), Value::integer(0), Value::integer(1)});
  ck.require(rep.ok() && rep.counterexamples.empty(),
             std::to_string(rep.counterexamples.size()) + " counterexamples");
  if (ck.ok) ck.detail = std::to_string(rep.checks) + " checks, 0 counterexamples";
  return ck;
}

std::string json_run(double& dt, refine::Verdict& out) {
  const auto c = sfv::testing::corpus_chart("AbsoluteValue");
  const auto p = ir::generate_reference(c).get();
  const auto opt = trace_options();
  const auto t0 = Clock::now();
  out = refine::verify(c, p, opt);
  dt = seconds_since(t0);
  return refine::to_json(out, opt);
}

std::string first_json;

Check criterion3() {
  Check ck;
  double dt = 0;
  refine::Verdict v;
  first_json = json_run(dt, v);
  ck.require(v.cosim.has_value(), "no co-simulation ran");
  if (!ck.ok) return ck;
  ck.require(v.cosim->traces == 10000, "ran " + std::to_string(v.cosim->traces) + " traces");
  ck.require(v.cosim->violations == 0, std::to_string(v.cosim->violations) + " violations");
  ck.require(dt < 60.0, "took " + std::to_string(dt) + " s");

  const auto c = sfv::testing::corpus_chart("AbsoluteValue");
  const auto p = ir::generate_reference(c).get();
  const auto cfg = trace_options().traces;
  std::size_t bad = 0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const auto tr = refine::generate_trace(c, cfg, i);
    ck.require(!tr.empty() && tr.size() <= 100, "trace length out of range");
    const auto rs = ir::run_impl(p, tr);
    for (std::size_t n = 0; n < tr.size(); ++n) {
      const auto u = tr[n].inputs.at("u").as_int();
      ck.require(u >= -10 && u <= 10, "input out of range");
      if (n >= 1 && rs[n].outputs.at("y").as_int() != std::llabs(u)) ++bad;
    }
  }
  ck.require(bad == 0, std::to_string(bad) + " steps with y != |u|");
  if (ck.ok) ck.detail = "10000 traces, 0 violations in " + std::to_string(dt) + " s";
  return ck;
}

Check criterion4() {
  Check ck;
  std::size_t checks = 0;
  for (const char* name : sfv::testing::kCorpusCharts) {
    const auto s = sfv::testing::generated(name);
    const auto a = sfv::testing::simplify_discrepancies(s);
    const auto b = sfv::testing::derived_discrepancies(s);
    checks += a.checks + b.checks;
    ck.require(a.discrepancies == 0, std::string(name) + ": " + std::to_string(a.discrepancies) +
                                         " pre/post simplify discrepancies");
    ck.require(b.discrepancies == 0, std::string(name) + ": " + std::to_string(b.discrepancies) +
                                         " derived/semantics discrepancies");
  }
  if (ck.ok) ck.detail = std::to_string(checks) + " checks, 0 discrepancies";
  return ck;
}

Check criterion5() {
  Check ck;
  const auto c = sfv::testing::corpus_chart("AbsoluteValue");
  const auto ms = refine::mutants(ir::generate_reference(c).get());
  ck.require(ms.size() >= 20, "only " + std::to_string(ms.size()) + " mutants");
  refine::VerifyOptions opt;
  opt.traces.count = 1000;
  std::size_t by_match = 0, by_cosim = 0;
  for (const auto& m : ms) {
    const auto v = refine::verify(c, m.program, opt);
    ck.require(v.outcome != refine::Outcome::Pass, m.id + " passed");
    const bool ce = v.cosim && v.cosim->counterexample;
    if (ce) {
      ck.require(v.cosim->counterexample->trace.size() <= 5, m.id + " counterexample not shrunk to 5 steps");
      ++by_cosim;
    }
    ck.require(v.outcome == refine::Outcome::Fail || ce, m.id + " neither FAIL nor counterexample");
    if (v.outcome == refine::Outcome::Fail) ++by_match;
  }
  if (ck.ok)
    ck.detail = std::to_string(ms.size()) + " mutants, " + std::to_string(by_match) + " FAIL, " +
                std::to_string(by_cosim) + " with counterexamples";
  return ck;
}

Check criterion6() {
  Check ck;
  std::string found;
  for (const auto& [file, construct] : {std::pair<std::string, std::string>{"AbsoluteValue_loop.c", "while"},
                                        {"AbsoluteValue_pointer.c", "address-of"}}) {
    cli::RunConfig cfg;
    cfg.command = "verify";
    cfg.chart = sfv::testing::kCorpus + "/charts/AbsoluteValue.sfc";
    cfg.implementation = sfv::testing::kCorpus + "/impl/" + file;
    std::ostringstream out, err;
    const int code = cli::run(cfg, out, err);
    const auto all = out.str() + err.str();
    ck.require(code == cli::kNonconformant, file + " exited " + std::to_string(code));
    ck.require(all.find("NONCONFORMANT") != std::string::npos, file + " has no NONCONFORMANT verdict");
    ck.require(all.find(construct) != std::string::npos, file + " does not name " + construct);
    std::smatch loc;
    ck.require(std::regex_search(all, loc, std::regex("[0-9]+:[0-9]+")), file + " has no line:column location");
    if (ck.ok) found += (found.empty() ? "" : ", ") + construct + " at " + loc.str();
  }
  if (ck.ok) ck.detail = "exit 3, " + found;
  return ck;
}

Check criterion7() {
  Check ck;
  double dt = 0;
  refine::Verdict v;
  const auto second = json_run(dt, v);
  ck.require(!first_json.empty(), "first run missing");
  ck.require(second == first_json, "reports differ");
  if (ck.ok) ck.detail = std::to_string(second.size()) + " identical bytes";
  return ck;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 verify AbsoluteValue against generated code", criterion1},
      {"2 retrieve relation and property check", criterion2},
      {"3 seeded co-simulation computes |u|", criterion3},
      {"4 small-domain equivalence over the corpus", criterion4},
      {"5 mutants are all detected", criterion5},
      {"6 loop and pointer samples are NONCONFORMANT", criterion6},
      {"7 same seed gives identical JSON", criterion7},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check ck;
    try {
      ck = fn();
    } catch (const std::exception& e) {
      ck.ok = false;
      ck.detail = std::string("exception: ") + e.what();
    }
    std::cout << (ck.ok ? "PASS " : "FAIL ") << name << ": " << ck.detail << std::endl;
    if (!ck.ok) ++failed;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
