#include <benchmark/benchmark.h>

#include <anonpram/algorithms.hpp>
#include <anonpram/collectives.hpp>

using namespace anonpram;

namespace {

void BM_RoundThroughput(benchmark::State& state) {
    auto n = static_cast<std::uint32_t>(state.range(0));
    Program p;
    p.body = [](ProcContext& ctx) -> ProcTask {
        for (int i = 0; i < 256; ++i) {
            co_await ctx.write(0, 1);
            (void)co_await ctx.read(0);
        }
    };
    std::uint64_t trial = 0;
    for (auto _ : state) {
        RunResult r = run_program(n, p, WritePolicy::common(), SeedSpec{1, trial++});
        benchmark::DoNotOptimize(r.metrics.rounds);
    }
    state.SetItemsProcessed(state.iterations() * n * 512);
}
BENCHMARK(BM_RoundThroughput)->Arg(16)->Arg(256)->Arg(1024);

void BM_DrawUniform(benchmark::State& state) {
    SplitMixSource src(7);
    for (auto _ : state) benchmark::DoNotOptimize(draw_uniform(src, 6));
}
BENCHMARK(BM_DrawUniform);

void BM_TreePrefixCount(benchmark::State& state) {
    auto n = static_cast<std::uint32_t>(state.range(0));
    std::uint64_t m = 4ULL * n;
    Program p;
    p.body = [m](ProcContext& ctx) -> ProcTask {
        std::uint64_t bin = ctx.draw(m);
        TreeLayout t = TreeLayout::over(m, ctx.allocate_shared(TreeLayout::region_size(m)));
        PrefixCount pc = co_await tree_prefix_count(ctx, t, bin, 1);
        ctx.set_output(pc.total);
    };
    std::uint64_t trial = 0;
    for (auto _ : state) {
        RunResult r = run_program(n, p, WritePolicy::common(), SeedSpec{2, trial++});
        benchmark::DoNotOptimize(r.outputs);
    }
}
BENCHMARK(BM_TreePrefixCount)->Arg(64)->Arg(1024);

void BM_VerifyCollision(benchmark::State& state) {
    Program p;
    p.memory_window = 2;
    p.body = [](ProcContext& ctx) -> ProcTask {
        int hits = 0;
        for (int i = 0; i < 64; ++i)
            hits += co_await algo::verify_collision(ctx, 0, 1) ? 1 : 0;
        ctx.set_output(hits);
    };
    std::uint64_t trial = 0;
    for (auto _ : state) {
        RunResult r = run_program(8, p, WritePolicy::common(), SeedSpec{3, trial++});
        benchmark::DoNotOptimize(r.outputs);
    }
}
BENCHMARK(BM_VerifyCollision);

void BM_Algorithm(benchmark::State& state, const char* id) {
    auto n = static_cast<std::uint32_t>(state.range(0));
    const auto* info = algo::find_algorithm(id);
    algo::AlgoConfig cfg;
    if (info->las_vegas) cfg.n_known = n;
    Program prog = algo::make_program(*info, cfg);
    WritePolicy pol = info->model == WritePolicy::Variant::Common
                          ? WritePolicy::common()
                          : WritePolicy::arbitrary();
    RunLimits lim;
    lim.round_cap = 64 * algo::expected_rounds(*info, n, cfg);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        RunResult r = run_program(n, prog, pol, SeedSpec{4, trial++}, lim);
        benchmark::DoNotOptimize(r.metrics.rounds);
    }
}
BENCHMARK_CAPTURE(BM_Algorithm, arb_bnd_lv, "arb-bnd-lv")->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_Algorithm, com_unb_lv, "com-unb-lv")->Arg(64)->Arg(512);
BENCHMARK_CAPTURE(BM_Algorithm, com_bnd_mc, "com-bnd-mc")->Arg(64);

}  // namespace

BENCHMARK_MAIN();
