#pragma once

#include "dtdr/network.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dtdr {

/// Dotted path into network_config. Layers are numbered from 1, matching the usual
/// notation (layers.1.beta is the input layer's bifurcation parameter).
///   layers.<k>.{beta, tau_fast, delta_slow, tau_delay, bias, n_nodes, input_gain,
///               w_from_prev, w_from_next, initial_state}
///   mask.hold_fraction, substeps_per_node, washout_steps
double get_parameter(const network_config& config, std::string_view path);
/// Integer-valued fields require an integral value. Throws config_error on unknown paths.
void set_parameter(network_config& config, std::string_view path, double value);
bool is_parameter_path(const network_config& config, std::string_view path);

/// Names accepted after layers.<k>.
const std::vector<std::string>& layer_field_names();

struct grid_axis {
    std::string parameter_path;
    std::vector<double> values;

    bool operator==(const grid_axis&) const = default;
};

/// n evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int n);

} // namespace dtdr
