// Hot-path microbenchmarks: the gamma evaluation behind every overload
// prediction, the per-point implicit solve, link recovery, and full runs.

#include "rivalnet/analytic.hpp"
#include "rivalnet/embedding.hpp"
#include "rivalnet/gamma.hpp"
#include "rivalnet/graph.hpp"
#include "rivalnet/latent.hpp"
#include "rivalnet/sim.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rivalnet;

void bm_gamma_p_series(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-9;
        benchmark::DoNotOptimize(gamma_p(4.0, 2.0 + x));
    }
}
BENCHMARK(bm_gamma_p_series);

void bm_gamma_p_continued_fraction(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-9;
        benchmark::DoNotOptimize(gamma_p(4.0, 40.0 + x));
    }
}
BENCHMARK(bm_gamma_p_continued_fraction);

void bm_connect_probability(benchmark::State& state) {
    double r = 4.0;
    for (auto _ : state) {
        r += 1e-9;
        benchmark::DoNotOptimize(connect_probability(r, 0.0147, 128));
    }
}
BENCHMARK(bm_connect_probability);

void bm_pre_overload_point(benchmark::State& state) {
    PowerPair powers{1.0, 2.0};
    InitialState init{40.0, 16.0, 24.0};
    double grid[1] = {static_cast<double>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pre_overload(powers, init, grid));
    }
}
BENCHMARK(bm_pre_overload_point)->Arg(100)->Arg(10000)->Arg(1000000);

void bm_recover_links(benchmark::State& state) {
    const NodeId n = static_cast<NodeId>(state.range(0));
    Graph g = generate_power_law(n, 2.5, 7);
    WalkParams walk;
    walk.walk_length = 20;
    walk.walks_per_node = 2;
    walk.window = 4;
    OptimizeOptions options;
    options.dim = 8;
    options.epochs = 2;
    EmbeddingSet emb = optimize(g, walk, options, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(recover_links(g, emb, 0.05));
    }
    state.SetComplexityN(n);
}
BENCHMARK(bm_recover_links)->Arg(250)->Arg(500)->Arg(1000)->Complexity(benchmark::oNSquared);

void bm_full_run(benchmark::State& state) {
    const NodeId n = static_cast<NodeId>(state.range(0));
    Graph g = generate_power_law(n, 2.5, 7);
    WalkParams walk;
    walk.walk_length = 20;
    walk.walks_per_node = 2;
    walk.window = 4;
    OptimizeOptions options;
    options.dim = 8;
    options.epochs = 2;
    EmbeddingSet emb = optimize(g, walk, options, 7);
    LatentModel model = fit_gaussian(emb);
    Graph recovered = recover_links(g, emb, 8.0 * model.variance);

    CompetitionConfig config;
    config.powers = {1.0, 2.0};
    config.capacity = static_cast<double>(n);
    config.seeds1 = 16;
    config.seeds2 = 24;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.rng_seed = ++seed;
        RunResult result = run(recovered, config);
        benchmark::DoNotOptimize(result.final_clock);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_full_run)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
