#pragma once

#include "dtdr/network.hpp"
#include "dtdr/readout.hpp"
#include "dtdr/task.hpp"
#include "dtdr/timeseries.hpp"

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace dtdr {

/// Largest Lyapunov exponents used as divergence reference slopes (per unit time).
inline constexpr double lyapunov_mackey_glass = 5.8e-3;
inline constexpr double lyapunov_lorenz = 0.91;

struct embedding_spec {
    int dimension = 3;
    int lag = 1;

    bool operator==(const embedding_spec&) const = default;
};

/// Defaults: m = 3 with lag 17 samples (Mackey-Glass) or 3 samples (Lorenz).
embedding_spec default_embedding(chaos_system system);

struct autonomous_options {
    /// Escape when |output - centre| exceeds escape_factor * (max - min) of the warmup.
    double escape_factor = 10.0;

    bool operator==(const autonomous_options&) const = default;
};

struct autonomous_run {
    /// Predictions of the n_steps samples following the warmup.
    timeseries output;
    /// Value injected at each closed-loop step (injected[k] drives the step producing output[k + 1]).
    std::vector<double> injected;
    bool escaped = false;
};

/// Drives the reservoir with the warmup (teacher forcing), then closes the loop: every later
/// input is the readout output of the previous step. The readout must have one output trained
/// for one-step-ahead prediction.
autonomous_run run_autonomous(const network_config& config, const readout_weights& weights,
                              const timeseries& warmup, int n_steps, const autonomous_options& opts = {});

/// Rows v(n) = (s(n), s(n - lag), ..., s(n - (m - 1) * lag)) for n = (m - 1) * lag ... size - 1.
Eigen::MatrixXd takens_embed(const timeseries& series, const embedding_spec& spec);

struct divergence_curve_t {
    /// distance[k] belongs to step k + 1.
    std::vector<double> distance;
    double lyapunov_max = 0.0;
    double sample_interval = 1.0;
    /// Largest per-coordinate range of the embedded target.
    double attractor_diameter = 0.0;

    std::size_t size() const { return distance.size(); }
};

/// Pointwise Euclidean distance between the embedded prediction and target.
divergence_curve_t divergence_curve(const timeseries& prediction, const timeseries& target,
                                    const embedding_spec& spec, double lyapunov_max);

struct valid_time_result {
    /// Steps before the first threshold crossing (full horizon if none).
    std::size_t steps = 0;
    /// Same, in Lyapunov times: steps * sample_interval * lyapunov_max.
    double lyapunov_times = 0.0;
    bool exceeded = false;
};

/// First step whose distance exceeds threshold_fraction * attractor_diameter.
valid_time_result valid_time(const divergence_curve_t& curve, double threshold_fraction = 0.4);

struct saturation_result {
    bool saturated = false;
    /// Mean distance over the second half of the curve relative to the diameter.
    double late_mean_fraction = 0.0;
};

/// Saturation: the mean distance over the second half of the horizon stays above
/// threshold_fraction * attractor_diameter, i.e. the prediction has left the target trajectory
/// for good instead of tracking it.
saturation_result detect_saturation(const divergence_curve_t& curve, double threshold_fraction = 0.4);

/// End-to-end closed-loop evaluation on a prepared task with delta_n = 1.
struct autonomy_report {
    eval_report open_loop;
    autonomous_run run;
    timeseries target;
    divergence_curve_t curve;
    valid_time_result valid;
    saturation_result saturation;
    embedding_spec embedding;
    double threshold_fraction = 0.4;
};

struct autonomy_options {
    int warmup_steps = 500;
    int n_steps = 2000;
    double threshold_fraction = 0.4;
    embedding_spec embedding{};
    bool embedding_set = false;
    autonomous_options run{};

    bool operator==(const autonomy_options&) const = default;
};

/// Trains on the task, then runs closed-loop from the first sample after the training block with
/// warmup_steps teacher-driven samples immediately before it.
autonomy_report evaluate_autonomy(const network_config& config, const prepared_task& task,
                                  const autonomy_options& opts = {});

std::string autonomy_json(const autonomy_report& r);
/// Columns (n, distance).
void write_divergence_csv(const divergence_curve_t& curve, const std::filesystem::path& path);
/// Columns (n, prediction, target).
void write_autonomous_csv(const autonomy_report& r, const std::filesystem::path& path);

} // namespace dtdr
