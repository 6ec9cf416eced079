#include <benchmark/benchmark.h>

#include "sfverify/chart_dsl.hpp"
#include "sfverify/chart_sem.hpp"
#include "sfverify/cli.hpp"
#include "sfverify/cosim.hpp"
#include "sfverify/derive.hpp"
#include "sfverify/reference_gen.hpp"
#include "sfverify/retrieve.hpp"
#include "sfverify/simplify.hpp"
#include "sfverify/verify.hpp"

namespace {

using namespace sfv;

const char* const kCharts[] = {"AbsoluteValue", "Parallel", "Hierarchy", "History", "Broadcast"};

chart::ChartDef load(std::int64_t i) {
  const std::string path = std::string(SFVERIFY_CORPUS_DIR) + "/charts/" + kCharts[i] + ".sfc";
  return chart::parse_chart(*cli::read_file(path)).get();
}

void BM_ChartStep(benchmark::State& state) {
  const auto c = load(state.range(0));
  refine::TraceConfig cfg;
  const auto trace = refine::generate_trace(c, cfg, 1);
  sem::SemOptions opt;
  opt.record_trace = false;
  for (auto _ : state) {
    auto s = sem::init_state(c);
    for (const auto& in : trace) s = sem::step(c, s, in, opt).state;
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.size()));
  state.SetLabel(kCharts[state.range(0)]);
}
BENCHMARK(BM_ChartStep)->DenseRange(0, 4);

void BM_DeriveSimplify(benchmark::State& state) {
  const auto c = load(state.range(0));
  const auto p = ir::generate_reference(c).get();
  const auto r = retrieve::synthesize(c, p).get();
  for (auto _ : state) benchmark::DoNotOptimize(refine::simplify(refine::derive_step(c, r, p), c, r));
  state.SetLabel(kCharts[state.range(0)]);
}
BENCHMARK(BM_DeriveSimplify)->DenseRange(0, 4);

void BM_Cosimulate(benchmark::State& state) {
  const auto c = load(0);
  const auto p = ir::generate_reference(c).get();
  const auto r = retrieve::synthesize(c, p).get();
  refine::TraceConfig cfg;
  cfg.count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(refine::cosimulate(c, p, r, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cosimulate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_VerifyNoCosim(benchmark::State& state) {
  const auto c = load(state.range(0));
  const auto p = ir::generate_reference(c).get();
  refine::VerifyOptions opt;
  opt.cosimulate = false;
  for (auto _ : state) benchmark::DoNotOptimize(refine::verify(c, p, opt));
  state.SetLabel(kCharts[state.range(0)]);
}
BENCHMARK(BM_VerifyNoCosim)->DenseRange(0, 4);

}  // namespace

BENCHMARK_MAIN();
