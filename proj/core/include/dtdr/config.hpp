#pragma once

#include "dtdr/autonomy.hpp"
#include "dtdr/network.hpp"
#include "dtdr/params.hpp"
#include "dtdr/task.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dtdr {

struct sweep_section {
    std::vector<grid_axis> axes;
    int parallelism = 1;

    bool operator==(const sweep_section&) const = default;
};

struct compare_section {
    /// Preset names whose network sections are compared on this config's task.
    std::vector<std::string> presets;
    bool enforce_budget = true;

    bool operator==(const compare_section&) const = default;
};

/// Everything one CLI run needs. All randomness derives from `seed`: mask and Mackey-Glass
/// history seeds come from labelled derivations unless set explicitly.
struct experiment_config {
    std::string preset;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> mask_seed;
    std::optional<std::uint64_t> history_seed;
    task_spec task;
    network_config network;
    autonomy_options eval;
    sweep_section sweep;
    compare_section compare;

    /// Re-derives the dependent seeds from `seed` (explicit overrides win).
    void apply_seeds();
    /// All violations of the typed configs, each naming its key path.
    std::vector<std::string> validation_errors() const;
};

/// Key-value document with [sections]:
///
///   preset = fig3c          # optional, expanded first; later keys override it
///   seed = 42
///   [task]     system, delta_n, n_train, n_test, discard, standardize, input_offset,
///              input_scale, mackey_glass.*, lorenz.*
///   [network]  layers, substeps_per_node, washout_steps, gating_override, mask.*,
///              layers.<k>.<field>, layers.*.<field>
///   [train]    ridge_grid, validation_fraction, include_bias
///   [eval]     embedding.dimension, embedding.lag, threshold_fraction, warmup_steps,
///              n_steps, escape_factor
///   [sweep]    parallelism, axes.<k>.path, axes.<k>.values
///   [compare]  presets, enforce_budget
///
/// Lists are comma separated; `linspace(lo, hi, n)` is accepted wherever a list is. Throws
/// config_error listing every problem with its line and key.
experiment_config parse_config(const std::string& text);

/// Canonical, fully expanded text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const experiment_config& config);
/// Only the [network] section body (used for digests).
std::string serialize_network(const network_config& network);

bool same_config(const experiment_config& a, const experiment_config& b);

/// Built-in presets reproducing the published experiments.
const std::vector<std::string>& preset_names();
/// Config text of a preset; throws config_error for unknown names.
const std::string& preset_text(const std::string& name);

} // namespace dtdr
