#pragma once

#include "dtdr/network.hpp"
#include "dtdr/state_matrix.hpp"
#include "dtdr/timeseries.hpp"

#include <array>
#include <span>
#include <vector>

namespace dtdr {

/// Substep-resolution record of one layer: state after each substep and the nonlinear term
/// beta * sin^2(d + b) held during it.
struct layer_trace {
    double step = 0.0;
    std::vector<double> x;
    std::vector<double> nonlinear;
};

/// Time integrator of a cascaded delay network, advanced one input sample at a time.
///
/// The linear part of each layer is propagated exactly over a substep (exponential integrator,
/// including the slow integral variable of band-pass layers) while the nonlinear term, the
/// delayed feedback and the inter-layer coupling are held at their substep-start values.
/// Lookback between grid points is linearly interpolated.
class simulator {
public:
    explicit simulator(const network_config& config);

    /// Injects one input sample for a full hold interval and writes the N_i node samples of every
    /// layer into `row` (size total_nodes()).
    void step(double input, std::span<double> row);

    /// Records layer `layer` (0-based) into `sink` from now on; nullptr stops recording.
    void trace_layer(int layer, layer_trace* sink);

    const network_config& config() const { return config_; }
    int total_nodes() const { return total_nodes_; }
    long steps_taken() const { return steps_; }
    double time() const { return static_cast<double>(substeps_done_) * h_; }

private:
    struct sample_event {
        int substep;   // 1-based substep index within the hold interval
        double frac;   // interpolation weight towards this substep's value
        int column;
    };

    struct layer_state {
        // propagator over one substep: [x y]' = P [x y f]'
        std::array<double, 6> prop{};
        double lag = 0.0;   // tau_delay in substeps
        long lag_int = 0;
        double lag_frac = 0.0;
        std::vector<double> ring;
        std::size_t head = 0;
        double x = 0.0;
        double y = 0.0;
        std::vector<sample_event> events;

        double delayed() const;
        void push(double v);
    };

    network_config config_;
    std::vector<layer_state> layers_;
    std::vector<double> x_start_;
    std::vector<double> x_prev_sub_;
    int total_nodes_ = 0;
    int substeps_per_hold_ = 0;
    double h_ = 0.0;
    long steps_ = 0;
    long substeps_done_ = 0;
    int traced_layer_ = -1;
    layer_trace* trace_ = nullptr;
};

/// The masked drive of layer 1 at time t: input_gain * mask[slot(t)] * s(n(t)), where each input
/// sample is held for hold_fraction * tau_delay and the mask cycles once per hold interval.
double drive_signal(const timeseries& s, const mask_spec& mask, const layer_config& layer1, double t);

/// Runs the network over the scalar input and returns the state rows after the washout.
state_matrix simulate(const network_config& config, const timeseries& s);
state_matrix simulate(const network_config& config, std::span<const double> input);

/// Like simulate() but also returns the substep trace of one layer over the whole run
/// (washout included).
state_matrix simulate_traced(const network_config& config, std::span<const double> input, int layer,
                             layer_trace& trace);

} // namespace dtdr
