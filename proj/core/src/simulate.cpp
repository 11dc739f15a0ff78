#include "dtdr/simulate.hpp"

#include "dtdr/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace dtdr {

namespace {

/// Exact one-step propagator of tau*x' = -x - delta*y + f, y' = x with f held constant, from the
/// exponential of the augmented generator [[-1/tau, -delta/tau, 1/tau], [1, 0, 0], [0, 0, 0]].
std::array<double, 6> linear_propagator(const layer_config& l, double h)
{
    if (!l.band_pass()) {
        const double a = std::exp(-h / l.tau_fast);
        return {a, 0.0, -std::expm1(-h / l.tau_fast), 0.0, 1.0, 0.0};
    }
    Eigen::Matrix3d gen;
    gen << -1.0 / l.tau_fast, -l.delta_slow / l.tau_fast, 1.0 / l.tau_fast,
            1.0, 0.0, 0.0,
            0.0, 0.0, 0.0;
    const Eigen::Matrix3d e = (gen * h).exp();
    return {e(0, 0), e(0, 1), e(0, 2), e(1, 0), e(1, 1), e(1, 2)};
}

} // namespace

double simulator::layer_state::delayed() const
{
    const std::size_t n = ring.size();
    const double a = ring[(head + n - static_cast<std::size_t>(lag_int)) % n];
    if (lag_frac == 0.0)
        return a;
    const double b = ring[(head + n - static_cast<std::size_t>(lag_int) - 1) % n];
    return (1.0 - lag_frac) * a + lag_frac * b;
}

void simulator::layer_state::push(double v)
{
    head = head + 1 == ring.size() ? 0 : head + 1;
    ring[head] = v;
}

simulator::simulator(const network_config& config)
    : config_(config.with_mask())
{
    config_.validate();
    h_ = config_.substep();
    const int n1 = config_.layers.front().n_nodes;
    substeps_per_hold_ = n1 * config_.substeps_per_node;
    total_nodes_ = config_.total_nodes();

    int col_offset = 0;
    for (const auto& l : config_.layers) {
        layer_state st;
        st.prop = linear_propagator(l, h_);
        st.lag = l.tau_delay / h_;
        if (std::abs(st.lag - std::round(st.lag)) < 1e-9)
            st.lag = std::round(st.lag);
        st.lag_int = static_cast<long>(std::floor(st.lag));
        st.lag_frac = st.lag - static_cast<double>(st.lag_int);
        st.ring.assign(static_cast<std::size_t>(st.lag_int) + 2, l.initial_state);
        st.x = l.initial_state;

        // node sigma of this layer is sampled at (sigma + 1) * J / N_i substeps into the interval
        const long J = substeps_per_hold_;
        for (int s = 0; s < l.n_nodes; ++s) {
            const long num = static_cast<long>(s + 1) * J;
            const long whole = num / l.n_nodes;
            const long rem = num % l.n_nodes;
            if (rem == 0)
                st.events.push_back({static_cast<int>(whole), 1.0, col_offset + s});
            else
                st.events.push_back({static_cast<int>(whole + 1), static_cast<double>(rem) / l.n_nodes,
                                     col_offset + s});
        }
        col_offset += l.n_nodes;
        layers_.push_back(std::move(st));
    }
    x_start_.resize(layers_.size());
    x_prev_sub_.resize(layers_.size());
}

void simulator::trace_layer(int layer, layer_trace* sink)
{
    if (sink && (layer < 0 || layer >= static_cast<int>(layers_.size())))
        throw argument_error("trace_layer: layer out of range");
    traced_layer_ = sink ? layer : -1;
    trace_ = sink;
    if (trace_)
        trace_->step = h_;
}

void simulator::step(double input, std::span<double> row)
{
    if (row.size() != static_cast<std::size_t>(total_nodes_))
        throw argument_error("simulator::step: row size must equal the total node count");
    const auto& mask = config_.mask.values;
    const int spn = config_.substeps_per_node;
    const std::size_t n_layers = layers_.size();
    std::vector<std::size_t> next_event(n_layers, 0);

    int j = 0;
    for (std::size_t slot = 0; slot < mask.size(); ++slot) {
        const double u = mask[slot] * input;
        for (int sub = 0; sub < spn; ++sub) {
            ++j;
            for (std::size_t i = 0; i < n_layers; ++i)
                x_start_[i] = layers_[i].x;

            for (std::size_t i = 0; i < n_layers; ++i) {
                const auto& lc = config_.layers[i];
                auto& st = layers_[i];
                double d = st.delayed() + lc.input_gain * u;
                if (i > 0)
                    d += lc.w_from_prev * x_start_[i - 1];
                if (i + 1 < n_layers)
                    d += lc.w_from_next * x_start_[i + 1];
                const double sn = std::sin(d + lc.bias);
                const double f = lc.beta * sn * sn;
                const auto& p = st.prop;
                const double x = st.x;
                st.x = p[0] * x + p[1] * st.y + p[2] * f;
                if (lc.band_pass())
                    st.y = p[3] * x + p[4] * st.y + p[5] * f;
                if (!std::isfinite(st.x) || !std::isfinite(st.y))
                    throw blowup_error("non-finite state in layer " + std::to_string(i + 1) + " at t = " +
                                       std::to_string(static_cast<double>(substeps_done_ + 1) * h_));
                st.push(st.x);
                if (trace_ && static_cast<int>(i) == traced_layer_) {
                    trace_->x.push_back(st.x);
                    trace_->nonlinear.push_back(f);
                }
                auto& ev = next_event[i];
                while (ev < st.events.size() && st.events[ev].substep == j) {
                    const auto& e = st.events[ev];
                    row[static_cast<std::size_t>(e.column)] =
                        e.frac == 1.0 ? st.x : (1.0 - e.frac) * x_start_[i] + e.frac * st.x;
                    ++ev;
                }
            }
            ++substeps_done_;
        }
    }
    ++steps_;
}

double drive_signal(const timeseries& s, const mask_spec& mask, const layer_config& layer1, double t)
{
    if (mask.values.empty())
        throw argument_error("drive_signal: mask has no values");
    const double hold = mask.hold_fraction * layer1.tau_delay;
    if (!(t >= 0.0))
        throw argument_error("drive_signal: t must be >= 0");
    const auto n = static_cast<std::size_t>(std::floor(t / hold));
    if (n >= s.size())
        throw argument_error("drive_signal: t beyond the input span");
    const double theta = hold / static_cast<double>(mask.values.size());
    auto slot = static_cast<std::size_t>(std::floor((t - static_cast<double>(n) * hold) / theta));
    slot = std::min(slot, mask.values.size() - 1);
    return layer1.input_gain * mask.values[slot] * s(n, 0);
}

state_matrix simulate(const network_config& config, const timeseries& s)
{
    if (s.dim() != 1)
        throw argument_error("simulate: the input series must be scalar");
    return simulate(config, std::span<const double>(s.data()));
}

namespace {

state_matrix run(simulator& sim, std::span<const double> input)
{
    const auto& cfg = sim.config();
    const auto washout = static_cast<std::size_t>(cfg.washout_steps);
    if (input.size() <= washout)
        throw argument_error("simulate: input length " + std::to_string(input.size()) +
                             " does not exceed washout_steps " + std::to_string(washout));
    std::vector<int> sizes;
    for (const auto& l : cfg.layers)
        sizes.push_back(l.n_nodes);
    state_matrix out(static_cast<Eigen::Index>(input.size() - washout), std::move(sizes));
    std::vector<double> scratch(static_cast<std::size_t>(sim.total_nodes()));
    for (std::size_t n = 0; n < input.size(); ++n) {
        if (n < washout) {
            sim.step(input[n], scratch);
        } else {
            auto r = out.entries().row(static_cast<Eigen::Index>(n - washout));
            sim.step(input[n], std::span<double>(r.data(), static_cast<std::size_t>(r.size())));
        }
    }
    return out;
}

} // namespace

state_matrix simulate(const network_config& config, std::span<const double> input)
{
    simulator sim(config);
    return run(sim, input);
}

state_matrix simulate_traced(const network_config& config, std::span<const double> input, int layer,
                             layer_trace& trace)
{
    simulator sim(config);
    sim.trace_layer(layer, &trace);
    return run(sim, input);
}

} // namespace dtdr
