#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dtdr {

/// One delay-coupled nonlinear node:
///   tau_fast * x' = -x - delta_slow * y + beta * sin^2(d + bias),   y' = x
///   d(t) = x(t - tau_delay) + w_from_prev * x_prev(t) + w_from_next * x_next(t) + input_gain * u(t)
/// delta_slow = 0 gives a low-pass layer, delta_slow > 0 a band-pass layer.
struct layer_config {
    double beta = 1.0;
    double tau_fast = 0.6e-3;
    double delta_slow = 0.0;
    double tau_delay = 12.0;
    double bias = 0.2;
    int n_nodes = 600;
    double input_gain = 0.0;
    double w_from_prev = 0.0;
    double w_from_next = 0.0;
    /// x(t) for t <= 0; the delay history starts flat at this value.
    double initial_state = 0.0;

    bool band_pass() const { return delta_slow > 0.0; }
    bool operator==(const layer_config&) const = default;
};

enum class mask_distribution { uniform_pm1, binary_pm1 };

std::string to_string(mask_distribution d);
mask_distribution parse_mask_distribution(const std::string& s);

/// Input mask of layer 1. An empty `values` is filled by build_mask at simulation time.
struct mask_spec {
    std::vector<double> values;
    std::uint64_t seed = 0;
    mask_distribution distribution = mask_distribution::uniform_pm1;
    /// Input hold length as a fraction of layer 1's tau_delay.
    double hold_fraction = 0.8;

    bool operator==(const mask_spec&) const = default;
};

/// Seeded zero-mean mask of n_nodes values.
mask_spec build_mask(int n_nodes, std::uint64_t seed, mask_distribution distribution);

struct network_config {
    std::vector<layer_config> layers;
    mask_spec mask;
    int substeps_per_node = 2;
    int washout_steps = 100;
    std::uint64_t seed = 0;
    /// Permits input on layers > 1 and band-pass first layers (uncoupled baseline runs).
    bool gating_override = false;

    /// Every constraint violation, each prefixed with its key path (layers are 1-based).
    std::vector<std::string> validation_errors() const;
    /// Throws config_error listing all violations.
    void validate() const;

    int total_nodes() const;
    /// Hold interval of one input sample.
    double hold_interval() const;
    /// Integration step: hold_interval / (N_1 * substeps_per_node).
    double substep() const;
    /// Copy with the mask values materialized.
    network_config with_mask() const;

    bool operator==(const network_config&) const = default;
};

} // namespace dtdr
