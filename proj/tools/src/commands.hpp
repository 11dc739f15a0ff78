#pragma once

#include "run_context.hpp"

#include <string>

namespace dtdr::cli {

struct command_options {
    bool save_states = false;
    int parallelism = 0;
};

void cmd_generate(run_context& ctx);
void cmd_train(run_context& ctx, const command_options& opts);
void cmd_autonomous(run_context& ctx);
void cmd_sweep(run_context& ctx, const command_options& opts);
void cmd_compare(run_context& ctx, const command_options& opts);

} // namespace dtdr::cli
