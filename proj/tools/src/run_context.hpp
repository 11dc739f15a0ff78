#pragma once

#include "dtdr/config.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace dtdr::cli {

enum class log_level { quiet = 0, error, warn, info, debug };

/// Reads DTDR_LOG (quiet|error|warn|info|debug); unset means warn.
log_level level_from_env();
void log(log_level level, const std::string& message);

/// State shared by one command invocation: the resolved config, the output directory, and the
/// bookkeeping that ends up in manifest.json.
class run_context {
public:
    run_context(std::string command, experiment_config config, std::filesystem::path out_dir,
                std::vector<std::string> argv);

    const experiment_config& config() const { return config_; }
    experiment_config& config() { return config_; }
    const std::filesystem::path& out_dir() const { return out_dir_; }

    /// Path inside the output directory, recorded as an output.
    std::filesystem::path output(const std::string& name);
    void add_input(const std::filesystem::path& p) { inputs_.push_back(p.string()); }

    /// Writes manifest.json; `summary` is the one-line result also printed to stdout.
    void finish(const std::string& summary);

private:
    std::string command_;
    experiment_config config_;
    std::filesystem::path out_dir_;
    std::vector<std::string> argv_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace dtdr::cli
