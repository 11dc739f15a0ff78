#pragma once

#include "dtdr/chaos.hpp"
#include "dtdr/network.hpp"
#include "dtdr/readout.hpp"
#include "dtdr/state_matrix.hpp"
#include "dtdr/timeseries.hpp"

#include <string>

namespace dtdr {

enum class chaos_system { mackey_glass, lorenz };

std::string to_string(chaos_system s);
chaos_system parse_chaos_system(const std::string& s);

/// A chaotic-series prediction task: which system feeds the reservoir and how the readout is
/// trained and scored. The input and the target are the same scalar series (Lorenz: x only),
/// offset by train.delta_n.
struct task_spec {
    chaos_system system = chaos_system::mackey_glass;
    mackey_glass_params mackey_glass{};
    lorenz_params lorenz{};
    /// Transient samples dropped by the generator; negative selects the per-system default.
    long discard = -1;
    int n_test = 5000;
    bool standardize = true;
    /// Reservoir input is input_offset + input_scale * standardized sample. A positive offset
    /// gives every virtual node its own operating point through the mask.
    double input_offset = 0.0;
    double input_scale = 1.0;
    train_spec train{};

    std::size_t effective_discard() const;
    double sample_interval() const;
    std::vector<std::string> validation_errors() const;
    bool operator==(const task_spec&) const = default;
};

/// Generated data shared read-only by every network evaluated on a task.
struct prepared_task {
    task_spec spec;
    int washout_steps = 0;
    /// Scalar reservoir input in standardized units (normalization recorded).
    timeseries input;
    /// Full generator output in original units.
    timeseries raw;

    /// Samples fed to the reservoir: washout + n_train + n_test.
    std::size_t simulated_length() const;
    /// Target aligned to state rows: target(r) = input(washout + r).
    timeseries aligned_target() const;
};

/// offset + scale * series, with the normalization record updated so destandardize() still
/// returns original units.
timeseries encode_input(const timeseries& series, double offset, double scale);

/// Generates washout + n_train + n_test + delta_n samples and encodes component 0.
prepared_task prepare_task(const task_spec& spec, int washout_steps);

struct task_outcome {
    eval_report report;
    readout_weights weights;
    state_matrix states;
};

/// simulate -> train_ridge -> evaluate_readout on one network.
task_outcome run_task(const network_config& config, const prepared_task& task, bool keep_states = false);

} // namespace dtdr
