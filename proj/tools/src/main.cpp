#include "commands.hpp"
#include "run_context.hpp"

#include "dtdr/config.hpp"
#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/seed.hpp"
#include "dtdr/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

namespace cli = dtdr::cli;

enum exit_code : int { ok = 0, config_failure = 2, numeric_failure = 3, io_failure = 4 };

struct global_options {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    cli::command_options cmd;
};

dtdr::experiment_config load_config(const global_options& g)
{
    std::string text;
    if (!g.preset.empty())
        text = "preset = " + g.preset + "\n";
    if (!g.config_path.empty())
        text += dtdr::read_text_file(g.config_path);
    if (text.empty())
        throw dtdr::config_error("no configuration: pass --config <file> or --preset <name>");
    auto c = dtdr::parse_config(text);
    if (g.seed) {
        c.seed = *g.seed;
        c.apply_seeds();
    }
    return c;
}

int run(int argc, char** argv)
{
    CLI::App app{"Deep time-delay reservoir simulator and benchmark driver"};
    app.set_version_flag("--version", std::string(dtdr::version()));
    app.require_subcommand(1);

    global_options g;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", g.config_path, "Experiment config file")->check(CLI::ExistingFile);
        sub->add_option("--preset", g.preset, "Built-in preset (config keys override it)");
        sub->add_option("--out", g.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", g.seed, "Root seed (overrides the config)");
    };
    const auto add_parallel = [&](CLI::App* sub) {
        sub->add_option("--parallelism", g.cmd.parallelism, "Worker threads (default: [sweep] parallelism)")
            ->check(CLI::PositiveNumber);
    };

    auto* generate = app.add_subcommand("generate", "Generate the task's chaotic series");
    add_common(generate);
    auto* train = app.add_subcommand("train", "Simulate, train the readout and report NMSE");
    add_common(train);
    train->add_flag("--save-states", g.cmd.save_states, "Also write the full state matrix (states.bin)");
    auto* autonomous = app.add_subcommand("autonomous", "Closed-loop prediction and divergence analysis");
    add_common(autonomous);
    auto* sweep = app.add_subcommand("sweep", "Parameter grid scan");
    add_common(sweep);
    add_parallel(sweep);
    auto* compare = app.add_subcommand("compare", "Compare topologies from presets on one task");
    add_common(compare);
    add_parallel(compare);

    auto* presets = app.add_subcommand("presets", "List built-in presets or print one");
    std::string show;
    std::string dump_dir;
    presets->add_option("name", show, "Preset to print");
    presets->add_option("--dump", dump_dir, "Write every preset to <dir>/<name>.cfg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version requests exit 0; every usage error maps to the config exit code
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (presets->parsed()) {
        if (!dump_dir.empty()) {
            std::filesystem::create_directories(dump_dir);
            for (const auto& name : dtdr::preset_names())
                dtdr::write_text_file(std::filesystem::path(dump_dir) / (name + ".cfg"),
                                      "# " + name + "\n" + dtdr::preset_text(name));
            std::cout << "presets: wrote " << dtdr::preset_names().size() << " files to " << dump_dir << '\n';
        } else if (!show.empty()) {
            std::cout << dtdr::serialize_config(dtdr::parse_config("preset = " + show + "\n"));
        } else {
            for (const auto& name : dtdr::preset_names())
                std::cout << name << '\n';
        }
        return ok;
    }

    auto* sub = app.get_subcommands().front();
    cli::run_context ctx(sub->get_name(), load_config(g), g.out_dir, std::vector<std::string>(argv, argv + argc));
    if (!g.config_path.empty())
        ctx.add_input(g.config_path);
    cli::log(cli::log_level::info, "config digest " + std::to_string(dtdr::fnv1a64(dtdr::serialize_config(ctx.config()))));

    if (sub == generate)
        cli::cmd_generate(ctx);
    else if (sub == train)
        cli::cmd_train(ctx, g.cmd);
    else if (sub == autonomous)
        cli::cmd_autonomous(ctx);
    else if (sub == sweep)
        cli::cmd_sweep(ctx, g.cmd);
    else if (sub == compare)
        cli::cmd_compare(ctx, g.cmd);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const dtdr::config_error& e) {
        cli::log(cli::log_level::error, e.what());
        return config_failure;
    } catch (const dtdr::argument_error& e) {
        cli::log(cli::log_level::error, e.what());
        return config_failure;
    } catch (const dtdr::io_error& e) {
        cli::log(cli::log_level::error, e.what());
        return io_failure;
    } catch (const dtdr::error& e) {
        // blowup, degenerate data and failed training are all numeric failures
        cli::log(cli::log_level::error, e.what());
        return numeric_failure;
    } catch (const std::filesystem::filesystem_error& e) {
        cli::log(cli::log_level::error, e.what());
        return io_failure;
    }
}
