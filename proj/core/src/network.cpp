#include "dtdr/network.hpp"

#include "dtdr/error.hpp"
#include "dtdr/seed.hpp"

#include <cmath>
#include <numeric>

namespace dtdr {

std::string to_string(mask_distribution d)
{
    return d == mask_distribution::uniform_pm1 ? "uniform_pm1" : "binary_pm1";
}

mask_distribution parse_mask_distribution(const std::string& s)
{
    if (s == "uniform_pm1")
        return mask_distribution::uniform_pm1;
    if (s == "binary_pm1")
        return mask_distribution::binary_pm1;
    throw config_error("unknown mask distribution '" + s + "' (expected uniform_pm1 or binary_pm1)");
}

mask_spec build_mask(int n_nodes, std::uint64_t seed, mask_distribution distribution)
{
    if (n_nodes < 1)
        throw argument_error("build_mask: n_nodes must be >= 1");
    mask_spec m;
    m.seed = seed;
    m.distribution = distribution;
    m.values.resize(static_cast<std::size_t>(n_nodes));
    rng_t rng(seed);
    for (auto& v : m.values) {
        if (distribution == mask_distribution::uniform_pm1)
            v = uniform(rng, -1.0, 1.0);
        else
            v = (rng() >> 63) ? 1.0 : -1.0;
    }
    return m;
}

std::vector<std::string> network_config::validation_errors() const
{
    std::vector<std::string> errs;
    if (layers.empty())
        errs.emplace_back("layers: at least one layer is required");
    if (substeps_per_node < 2)
        errs.emplace_back("substeps_per_node: must be >= 2");
    if (washout_steps < 0)
        errs.emplace_back("washout_steps: must be >= 0");
    if (!(mask.hold_fraction > 0.0 && mask.hold_fraction <= 1.0))
        errs.emplace_back("mask.hold_fraction: must lie in (0, 1]");
    if (!layers.empty() && !mask.values.empty() &&
        mask.values.size() != static_cast<std::size_t>(layers.front().n_nodes))
        errs.emplace_back("mask.values: length must equal layers.1.n_nodes");

    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& l = layers[i];
        const std::string p = "layers." + std::to_string(i + 1) + ".";
        if (!(l.tau_fast > 0.0))
            errs.push_back(p + "tau_fast: must be > 0");
        if (!(l.tau_delay > 0.0))
            errs.push_back(p + "tau_delay: must be > 0");
        if (l.n_nodes < 1)
            errs.push_back(p + "n_nodes: must be >= 1");
        if (!(l.delta_slow >= 0.0))
            errs.push_back(p + "delta_slow: must be >= 0");
        for (double v : {l.beta, l.bias, l.input_gain, l.w_from_prev, l.w_from_next, l.initial_state})
            if (!std::isfinite(v)) {
                errs.push_back(p + "*: parameters must be finite");
                break;
            }
        if (i == 0) {
            if (l.w_from_prev != 0.0)
                errs.push_back(p + "w_from_prev: the first layer has no previous layer");
            if (l.delta_slow != 0.0 && !gating_override)
                errs.push_back(p + "delta_slow: the input layer must be low-pass (delta_slow = 0) unless gating_override is set");
        } else if (l.input_gain != 0.0 && !gating_override) {
            errs.push_back(p + "input_gain: only layer 1 receives the input (input_gain must be 0 for layers > 1) unless gating_override is set");
        }
        if (i + 1 == layers.size() && l.w_from_next != 0.0)
            errs.push_back(p + "w_from_next: the last layer has no next layer");
    }
    return errs;
}

void network_config::validate() const
{
    const auto errs = validation_errors();
    if (errs.empty())
        return;
    std::string msg = "invalid network config:";
    for (const auto& e : errs)
        msg += "\n  " + e;
    throw config_error(msg);
}

int network_config::total_nodes() const
{
    return std::accumulate(layers.begin(), layers.end(), 0,
                           [](int acc, const layer_config& l) { return acc + l.n_nodes; });
}

double network_config::hold_interval() const { return mask.hold_fraction * layers.front().tau_delay; }

double network_config::substep() const
{
    return hold_interval() / (static_cast<double>(layers.front().n_nodes) * substeps_per_node);
}

network_config network_config::with_mask() const
{
    network_config c = *this;
    if (c.mask.values.empty() && !c.layers.empty()) {
        const double hold = c.mask.hold_fraction;
        c.mask = build_mask(c.layers.front().n_nodes, c.mask.seed, c.mask.distribution);
        c.mask.hold_fraction = hold;
    }
    return c;
}

} // namespace dtdr
