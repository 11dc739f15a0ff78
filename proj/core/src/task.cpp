#include "dtdr/task.hpp"

#include "dtdr/error.hpp"
#include "dtdr/simulate.hpp"

#include <cmath>

namespace dtdr {

std::string to_string(chaos_system s) { return s == chaos_system::mackey_glass ? "mackey_glass" : "lorenz"; }

chaos_system parse_chaos_system(const std::string& s)
{
    if (s == "mackey_glass")
        return chaos_system::mackey_glass;
    if (s == "lorenz")
        return chaos_system::lorenz;
    throw config_error("unknown system '" + s + "' (expected mackey_glass or lorenz)");
}

std::size_t task_spec::effective_discard() const
{
    if (discard >= 0)
        return static_cast<std::size_t>(discard);
    return system == chaos_system::mackey_glass ? default_mackey_glass_discard : default_lorenz_discard;
}

double task_spec::sample_interval() const
{
    return system == chaos_system::mackey_glass ? mackey_glass.sample_interval : lorenz.sample_interval;
}

std::vector<std::string> task_spec::validation_errors() const
{
    auto errs = train.validation_errors();
    if (!(input_scale > 0.0) || !std::isfinite(input_offset))
        errs.emplace_back("task.input_scale: must be > 0 (and input_offset finite)");
    if (n_test < 2)
        errs.emplace_back("task.n_test: must be >= 2");
    try {
        if (system == chaos_system::mackey_glass)
            mackey_glass.validate();
        else
            lorenz.validate();
    } catch (const argument_error& e) {
        errs.emplace_back(std::string("task.") + e.what());
    }
    return errs;
}

std::size_t prepared_task::simulated_length() const
{
    return static_cast<std::size_t>(washout_steps) + static_cast<std::size_t>(spec.train.n_train) +
           static_cast<std::size_t>(spec.n_test);
}

timeseries prepared_task::aligned_target() const
{
    const auto w = static_cast<std::size_t>(washout_steps);
    return input.slice(w, input.size() - w);
}

timeseries encode_input(const timeseries& series, double offset, double scale)
{
    if (series.dim() != 1)
        throw argument_error("encode_input: series must be scalar");
    if (!(scale > 0.0))
        throw argument_error("encode_input: scale must be > 0");
    if (offset == 0.0 && scale == 1.0)
        return series;
    // stored = (orig - o) / k  becomes  offset + scale * stored = (orig - o') / k'
    normalization prev = series.norm();
    if (prev.is_identity())
        prev = {{0.0}, {1.0}};
    const double k = prev.scale[0] / scale;
    const normalization next{{prev.offset[0] - offset * k}, {k}};
    timeseries out(1, series.sample_interval());
    out.reserve(series.size());
    for (double v : series.data())
        out.push_back(offset + scale * v);
    out.set_norm(next);
    return out;
}

prepared_task prepare_task(const task_spec& spec, int washout_steps)
{
    if (washout_steps < 0)
        throw argument_error("prepare_task: washout_steps must be >= 0");
    prepared_task t;
    t.spec = spec;
    t.washout_steps = washout_steps;
    const std::size_t n = t.simulated_length() + static_cast<std::size_t>(spec.train.delta_n);
    if (spec.system == chaos_system::mackey_glass)
        t.raw = gen_mackey_glass(spec.mackey_glass, n, spec.effective_discard());
    else
        t.raw = gen_lorenz(spec.lorenz, n, spec.effective_discard());
    const auto x = t.raw.component(0);
    t.input = encode_input(spec.standardize ? standardize(x) : x, spec.input_offset, spec.input_scale);
    return t;
}

task_outcome run_task(const network_config& config, const prepared_task& task, bool keep_states)
{
    if (config.washout_steps != task.washout_steps)
        throw argument_error("run_task: network washout differs from the prepared task");
    const auto states = simulate(config, std::span<const double>(task.input.data()).first(task.simulated_length()));
    const auto target = task.aligned_target();
    task_outcome out;
    out.weights = train_ridge(states, target, task.spec.train);
    out.report = evaluate_readout(states, target, out.weights, task.spec.train, task.spec.n_test);
    if (keep_states)
        out.states = states;
    return out;
}

} // namespace dtdr
