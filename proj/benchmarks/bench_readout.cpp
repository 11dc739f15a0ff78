#include "dtdr/readout.hpp"
#include "dtdr/seed.hpp"

#include <benchmark/benchmark.h>

using namespace dtdr;

namespace {

state_matrix random_states(Eigen::Index rows, int cols)
{
    state_matrix m(rows, {cols});
    rng_t rng(1);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (int k = 0; k < cols; ++k)
            m.entries()(r, k) = uniform(rng, 0.0, 1.0);
    return m;
}

timeseries random_target(std::size_t n)
{
    rng_t rng(2);
    timeseries t(1, 1.0);
    for (std::size_t k = 0; k < n; ++k)
        t.push_back(uniform(rng, -1.0, 1.0));
    return t;
}

} // namespace

// Full ridge training (Gram matrix, validation over the default grid, refit) for
// n_train = 5000 and a growing feature count.
void BM_train_ridge(benchmark::State& state)
{
    const int features = static_cast<int>(state.range(0));
    const auto m = random_states(5100, features);
    const auto target = random_target(5101);
    train_spec spec;
    for (auto _ : state)
        benchmark::DoNotOptimize(train_ridge(m, target, spec));
}
BENCHMARK(BM_train_ridge)->Arg(300)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_single_ridge(benchmark::State& state)
{
    const auto m = random_states(5100, static_cast<int>(state.range(0)));
    const auto target = random_target(5101);
    train_spec spec;
    spec.ridge_grid = {1e-6};
    spec.validation_fraction = 0.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(train_ridge(m, target, spec));
}
BENCHMARK(BM_single_ridge)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_predict(benchmark::State& state)
{
    const auto m = random_states(5000, 1200);
    readout_weights w;
    w.matrix = Eigen::MatrixXd::Constant(1201, 1, 1e-3);
    for (auto _ : state)
        benchmark::DoNotOptimize(predict(m, w));
    state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_predict)->Unit(benchmark::kMillisecond);
