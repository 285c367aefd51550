#include <benchmark/benchmark.h>

#include "dtspan/andor.hpp"
#include "dtspan/dual_adversary.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/span_program.hpp"
#include "dtspan/truth_table.hpp"
#include "dtspan/weights.hpp"

using namespace dtspan;

static void BM_OptValueComplete(benchmark::State& state) {
    const DTree t = gen_complete(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(opt_value(t));
    state.SetItemsProcessed(state.iterations() * t.size());
}
BENCHMARK(BM_OptValueComplete)->Arg(8)->Arg(12)->Arg(16);

static void BM_CanonicalWeightsSpine(benchmark::State& state) {
    const DTree t = gen_spine(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(canonical_weights(t));
    state.SetItemsProcessed(state.iterations() * t.size());
}
BENCHMARK(BM_CanonicalWeightsSpine)->Arg(64)->Arg(1024);

static void BM_TreeRank(benchmark::State& state) {
    const DTree t = gen_complete(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tree_rank(t));
}
BENCHMARK(BM_TreeRank)->Arg(10)->Arg(14);

static void BM_Oracle(benchmark::State& state) {
    const DTree t = gen_and_chain(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_opt(t, 7, 1e-2).objective);
}
BENCHMARK(BM_Oracle)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_SpanVerifyAll(benchmark::State& state) {
    const DTree t = gen_parity(static_cast<int>(state.range(0)));
    const WeightMap w = canonical_weights(t);
    const SpanProgramInstance inst = build_span_program(t, w);
    for (auto _ : state) benchmark::DoNotOptimize(verify_span_all(inst, t).pass);
}
BENCHMARK(BM_SpanVerifyAll)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_DualFeasibility(benchmark::State& state) {
    const DTree t = gen_parity(static_cast<int>(state.range(0)));
    const DualAdvSolution sol = build_dual_adversary(t, canonical_weights(t));
    for (auto _ : state) benchmark::DoNotOptimize(check_feasibility(sol).pass);
}
BENCHMARK(BM_DualFeasibility)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_PaperGame(benchmark::State& state) {
    const AndOrTree t = AndOrTree::complete(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto prover = make_paper_prover();
        auto delayer = make_paper_delayer();
        benchmark::DoNotOptimize(play(t, *prover, *delayer).final_score);
    }
}
BENCHMARK(BM_PaperGame)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_FuncRank(benchmark::State& state) {
    // worst-case-ish: parity has maximal rank at every restriction
    const int n = static_cast<int>(state.range(0));
    TruthTable f = TruthTable::constant(n, 0);
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
        int par = 0;
        for (int j = 0; j < n; ++j) par ^= (x >> j) & 1;
        f.set(x, par);
    }
    for (auto _ : state) benchmark::DoNotOptimize(func_rank(f));
}
BENCHMARK(BM_FuncRank)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
