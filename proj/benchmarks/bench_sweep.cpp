#include "dtdr/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace dtdr;

// Wall time of a 2 x 4 grid on a small two-layer network against the worker count.
void BM_sweep_parallelism(benchmark::State& state)
{
    network_config c;
    layer_config l1;
    l1.beta = 1.4;
    l1.n_nodes = 100;
    l1.input_gain = 8.0;
    layer_config l2 = l1;
    l2.beta = 1.2;
    l2.input_gain = 0.0;
    l2.delta_slow = 0.01;
    c.layers = {l1, l2};
    c.mask.seed = 4;

    task_spec t;
    t.train.n_train = 1000;
    t.n_test = 500;
    t.input_offset = 0.2;
    t.input_scale = 0.01;
    const auto task = prepare_task(t, c.washout_steps);
    const std::vector<grid_axis> axes{{"layers.2.w_from_prev", {0.7, 1.4}}, {"layers.1.beta", {1.1, 1.3, 1.5, 1.7}}};
    for (auto _ : state)
        benchmark::DoNotOptimize(run_grid(c, task, axes, static_cast<int>(state.range(0))));
    state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_sweep_parallelism)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
