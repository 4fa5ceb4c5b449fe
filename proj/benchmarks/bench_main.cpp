#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <string>

#include "varscope/analysis.hpp"
#include "varscope/layout.hpp"
#include "varscope/scanner.hpp"

using namespace varscope;

namespace {

std::string synthetic_source(int groups) {
  std::string s;
  for (int i = 0; i < groups; ++i) {
    const auto n = std::to_string(i);
    s += "#if defined(F" + std::to_string(i % 8) + ") && !defined(G" + std::to_string(i % 5) + ")\n";
    s += "static int var_" + n + " = " + n + "; /* comment */\n";
    s += "int fn_" + n + "(int x)\n{\n  return x + var_" + n + ";\n}\n";
    s += "#else\nint fn_" + n + "(int x) { return x; }\n#endif\n";
  }
  return s;
}

void BM_SpliceAndStrip(benchmark::State& state) {
  const auto text = synthetic_source(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Diagnostics diags;
    benchmark::DoNotOptimize(splice_and_strip(text, diags, "bench.c"));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_SpliceAndStrip)->Arg(100)->Arg(1000);

void BM_AnalyzeSynthetic(benchmark::State& state) {
  MemoryTree tree({{"bench.c", synthetic_source(static_cast<int>(state.range(0)))}});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(tree));
}
BENCHMARK(BM_AnalyzeSynthetic)->Arg(50)->Arg(200);

void BM_AnalyzeFixture(benchmark::State& state) {
  DirectoryTree tree(VARSCOPE_FIXTURE_DIR);
  AnalysisOptions opts;
  opts.scan.include_paths = {"include"};
  for (auto _ : state) benchmark::DoNotOptimize(analyze(tree, opts));
}
BENCHMARK(BM_AnalyzeFixture);

void BM_Satisfiable(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<PresenceCondition> pcs;
  for (int i = 0; i < 64; ++i) {
    std::vector<PresenceCondition> clauses;
    for (int c = 0; c < state.range(0); ++c) {
      const auto a = PresenceCondition::atom("F" + std::to_string(rng() % 12));
      const auto b = PresenceCondition::atom("F" + std::to_string(rng() % 12));
      clauses.push_back(rng() % 2 ? (a || !b) : (!a || b));
    }
    pcs.push_back(make_and(clauses));
  }
  for (auto _ : state)
    for (const auto& pc : pcs) benchmark::DoNotOptimize(satisfiable(pc));
}
BENCHMARK(BM_Satisfiable)->Arg(4)->Arg(16);

void BM_PackDisks(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.5, 10.0);
  std::vector<double> radii(static_cast<std::size_t>(state.range(0)));
  for (auto& r : radii) r = dist(rng);
  std::sort(radii.rbegin(), radii.rend());
  for (auto _ : state) benchmark::DoNotOptimize(pack_disks(radii));
}
BENCHMARK(BM_PackDisks)->Arg(100)->Arg(300);

void BM_LayoutFixture(benchmark::State& state) {
  DirectoryTree tree(VARSCOPE_FIXTURE_DIR);
  AnalysisOptions opts;
  opts.scan.include_paths = {"include"};
  const auto model = analyze(tree, opts);
  for (auto _ : state) benchmark::DoNotOptimize(layout_to_json(compute_layout(model)));
}
BENCHMARK(BM_LayoutFixture);

}  // namespace

BENCHMARK_MAIN();
