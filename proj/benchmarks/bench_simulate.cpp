#include "dtdr/seed.hpp"
#include "dtdr/simulate.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace dtdr;

namespace {

network_config cascade(int layers, int nodes)
{
    network_config c;
    for (int i = 0; i < layers; ++i) {
        layer_config l;
        l.beta = i == 0 ? 1.4 : 1.2;
        l.n_nodes = nodes;
        l.input_gain = i == 0 ? 8.0 : 0.0;
        l.delta_slow = i == 0 ? 0.0 : 0.01;
        l.w_from_prev = i == 0 ? 0.0 : 1.4;
        c.layers.push_back(l);
    }
    c.washout_steps = 0;
    c.mask.seed = 1;
    return c;
}

std::vector<double> noise(std::size_t n)
{
    rng_t rng(3);
    std::vector<double> v(n);
    for (auto& x : v)
        x = uniform(rng, 0.19, 0.21);
    return v;
}

} // namespace

// Input samples per second for a cascade of `layers` x `nodes`.
void BM_simulate(benchmark::State& state)
{
    const auto c = cascade(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto input = noise(200);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(c, input));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(input.size()));
    state.counters["node_updates/s"] = benchmark::Counter(
        static_cast<double>(state.iterations()) * static_cast<double>(input.size()) * state.range(0) * state.range(1) *
            c.substeps_per_node,
        benchmark::Counter::kIsRate);
}
BENCHMARK(BM_simulate)->Args({1, 600})->Args({2, 600})->Args({3, 400})->Args({3, 600})->Unit(benchmark::kMillisecond);

void BM_substeps(benchmark::State& state)
{
    auto c = cascade(2, 600);
    c.substeps_per_node = static_cast<int>(state.range(0));
    const auto input = noise(100);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate(c, input));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(input.size()));
}
BENCHMARK(BM_substeps)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
