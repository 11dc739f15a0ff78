#pragma once

#include "dtdr/network.hpp"
#include "dtdr/seed.hpp"
#include "dtdr/timeseries.hpp"

#include <cmath>
#include <vector>

namespace dtdr::test {

/// Small low-pass layer with a short delay so tests stay fast.
inline layer_config small_layer(int n_nodes = 20)
{
    layer_config l;
    l.beta = 1.2;
    l.tau_fast = 0.05;
    l.tau_delay = 2.0;
    l.bias = 0.2;
    l.n_nodes = n_nodes;
    return l;
}

inline network_config small_network(int layers = 2, int n_nodes = 20, bool coupled = true)
{
    network_config c;
    auto first = small_layer(n_nodes);
    first.input_gain = 1.0;
    c.layers.push_back(first);
    for (int i = 1; i < layers; ++i) {
        auto l = small_layer(n_nodes);
        l.delta_slow = 0.05;
        l.tau_fast = 0.06;
        l.w_from_prev = coupled ? 0.8 : 0.0;
        c.layers.push_back(l);
    }
    c.mask.seed = 11;
    c.washout_steps = 10;
    return c;
}

inline std::vector<double> random_input(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0)
{
    rng_t rng(seed);
    std::vector<double> v(n);
    for (auto& x : v)
        x = uniform(rng, lo, hi);
    return v;
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace dtdr::test
