#include "commands.hpp"

#include "dtdr/autonomy.hpp"
#include "dtdr/chaos.hpp"
#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/readout.hpp"
#include "dtdr/sweep.hpp"
#include "dtdr/task.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <string>

namespace dtdr::cli {

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

prepared_task prepare(const run_context& ctx)
{
    const auto& c = ctx.config();
    log(log_level::info, "generating " + to_string(c.task.system) + " input");
    return prepare_task(c.task, c.network.washout_steps);
}

int effective_parallelism(const run_context& ctx, const command_options& opts)
{
    return opts.parallelism > 0 ? opts.parallelism : ctx.config().sweep.parallelism;
}

} // namespace

void cmd_generate(run_context& ctx)
{
    const auto& c = ctx.config();
    const auto& t = c.task;
    const std::size_t n = static_cast<std::size_t>(c.network.washout_steps) + t.train.n_train + t.n_test +
                          static_cast<std::size_t>(t.train.delta_n);
    timeseries raw = t.system == chaos_system::mackey_glass
                         ? gen_mackey_glass(t.mackey_glass, n, t.effective_discard())
                         : gen_lorenz(t.lorenz, n, t.effective_discard());
    std::vector<std::string> names;
    if (t.system == chaos_system::lorenz)
        names = {"x", "y", "z"};
    else
        names = {"x"};
    write_csv(raw, ctx.output("series.csv"), names);
    write_binary(raw, ctx.output("series.bin"));
    ctx.finish("generate: " + std::to_string(raw.size()) + " samples of " + to_string(t.system) + " (dim " +
               std::to_string(raw.dim()) + ") -> " + (ctx.out_dir() / "series.csv").string());
}

void cmd_train(run_context& ctx, const command_options& opts)
{
    const auto task = prepare(ctx);
    log(log_level::info, "simulating " + std::to_string(task.simulated_length()) + " steps on " +
                             std::to_string(ctx.config().network.total_nodes()) + " nodes");
    const auto out = run_task(ctx.config().network, task, true);

    nlohmann::json meta;
    meta["rows"] = out.states.rows();
    meta["layer_sizes"] = out.states.layer_sizes();
    meta["washout_steps"] = task.washout_steps;
    meta["sample_interval"] = task.input.sample_interval();
    meta["states_file"] = opts.save_states ? "states.bin" : "";
    write_text_file(ctx.output("states_meta.json"), meta.dump(2) + "\n");
    if (opts.save_states)
        write_binary(out.states, ctx.output("states.bin"));
    write_binary(out.weights, ctx.output("weights.bin"));
    write_text_file(ctx.output("report.json"), weights_summary_json(out.weights, out.report));

    const auto pred = predict(out.states, out.weights, task.input.sample_interval());
    const auto target = task.aligned_target();
    const std::size_t dn = static_cast<std::size_t>(task.spec.train.delta_n);
    std::string csv = "n,prediction,target\n";
    for (std::size_t r = 0; r + dn < target.size() && r < pred.size(); ++r)
        csv += std::to_string(r) + "," + format_double(pred(r, 0)) + "," + format_double(target(r + dn, 0)) + "\n";
    write_text_file(ctx.output("prediction.csv"), csv);

    ctx.finish("train: nmse_test=" + sci(out.report.nmse_test) + " nmse_train=" + sci(out.report.nmse_train) +
               " ridge=" + sci(out.report.chosen_ridge) + " n_test=" + std::to_string(out.report.n_test));
}

void cmd_autonomous(run_context& ctx)
{
    const auto task = prepare(ctx);
    const auto r = evaluate_autonomy(ctx.config().network, task, ctx.config().eval);
    write_autonomous_csv(r, ctx.output("autonomous.csv"));
    write_divergence_csv(r.curve, ctx.output("divergence.csv"));
    write_text_file(ctx.output("autonomy.json"), autonomy_json(r));
    std::string summary = "autonomous: valid_time=" + std::to_string(r.valid.steps) + " steps (" +
                          sci(r.valid.lyapunov_times) + " Lyapunov times)";
    summary += r.saturation.saturated ? " saturated" : " tracking";
    if (r.run.escaped)
        summary += " escaped";
    summary += " nmse_test=" + sci(r.open_loop.nmse_test);
    ctx.finish(summary);
}

void cmd_sweep(run_context& ctx, const command_options& opts)
{
    const auto& c = ctx.config();
    if (c.sweep.axes.empty())
        throw config_error("sweep: no axes configured ([sweep] axes.1.path / axes.1.values)");
    const auto task = prepare(ctx);
    const int par = effective_parallelism(ctx, opts);
    const auto result = run_grid(c.network, task, c.sweep.axes, par, [](std::size_t done, std::size_t total) {
        log(log_level::info, "sweep point " + std::to_string(done) + "/" + std::to_string(total));
    });
    write_sweep_csv(result, ctx.output("sweep.csv"));
    write_text_file(ctx.output("sweep.json"), sweep_json(result, serialize_config(c)));
    if (result.axes.size() == 2)
        write_heatmap_csv(result, ctx.output("heatmap.csv"));

    std::size_t failed = 0;
    for (const auto& row : result.rows)
        failed += row.status != point_status::ok;
    std::string summary = "sweep: " + std::to_string(result.rows.size()) + " points, " + std::to_string(failed) +
                          " failed";
    if (const auto b = result.best(); b < result.rows.size()) {
        summary += ", best nmse_test=" + sci(result.rows[b].nmse_test) + " at";
        for (std::size_t a = 0; a < result.axes.size(); ++a)
            summary += " " + result.axes[a].parameter_path + "=" + format_double(result.rows[b].coords[a]);
    }
    ctx.finish(summary);
}

void cmd_compare(run_context& ctx, const command_options& opts)
{
    const auto& c = ctx.config();
    if (c.compare.presets.empty())
        throw config_error("compare: no presets listed ([compare] presets = a, b, ...)");
    std::vector<topology_entry> specs;
    for (const auto& name : c.compare.presets) {
        std::string text = "preset = " + name + "\nseed = " + std::to_string(c.seed) + "\n";
        if (c.mask_seed)
            text += "[network]\nmask.seed = " + std::to_string(*c.mask_seed) + "\n";
        specs.push_back({name, parse_config(text).network});
    }
    const auto task = prepare(ctx);
    const auto rep = compare_topologies(specs, task, c.compare.enforce_budget, effective_parallelism(ctx, opts));
    write_comparison_csv(rep, ctx.output("compare.csv"));
    write_text_file(ctx.output("compare.json"), comparison_json(rep));
    std::string summary = "compare:";
    for (const auto& e : rep.entries)
        summary += " " + e.name + "=" + (e.status == point_status::ok ? sci(e.nmse_test) : to_string(e.status)) +
                   (e.rank ? " (#" + std::to_string(e.rank) + ")" : "");
    ctx.finish(summary);
}

} // namespace dtdr::cli
