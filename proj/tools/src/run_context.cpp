#include "run_context.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/version.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>
#include <unistd.h>

namespace dtdr::cli {

log_level level_from_env()
{
    const char* v = std::getenv("DTDR_LOG");
    if (!v)
        return log_level::warn;
    const std::string s(v);
    if (s == "quiet")
        return log_level::quiet;
    if (s == "error")
        return log_level::error;
    if (s == "info")
        return log_level::info;
    if (s == "debug")
        return log_level::debug;
    return log_level::warn;
}

void log(log_level level, const std::string& message)
{
    static const log_level threshold = level_from_env();
    if (level > threshold)
        return;
    static const char* const names[] = {"", "error", "warn", "info", "debug"};
    std::cerr << "dtdr: " << names[static_cast<int>(level)] << ": " << message << '\n';
}

run_context::run_context(std::string command, experiment_config config, std::filesystem::path out_dir,
                         std::vector<std::string> argv)
    : command_(std::move(command)), config_(std::move(config)), out_dir_(std::move(out_dir)), argv_(std::move(argv)),
      start_(std::chrono::steady_clock::now())
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir_, ec);
    if (ec)
        throw io_error("cannot create output directory " + out_dir_.string() + ": " + ec.message());
}

std::filesystem::path run_context::output(const std::string& name)
{
    auto p = out_dir_ / name;
    outputs_.push_back(p.string());
    return p;
}

namespace {

nlohmann::json host_fingerprint()
{
    char host[256] = {};
    if (gethostname(host, sizeof host - 1) != 0)
        host[0] = '\0';
    return {{"hostname", host},
            {"hardware_threads", std::thread::hardware_concurrency()},
            {"compiler", __VERSION__},
            {"cplusplus", __cplusplus}};
}

} // namespace

void run_context::finish(const std::string& summary)
{
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["tool_version"] = std::string(version());
    m["config"] = serialize_config(config_);
    m["seeds"] = {{"root", config_.seed},
                  {"mask", config_.network.mask.seed},
                  {"history", config_.task.mackey_glass.history.seed}};
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["wall_seconds"] = wall;
    m["host"] = host_fingerprint();
    m["summary"] = summary;
    write_text_file(out_dir_ / "manifest.json", m.dump(2) + "\n");
    std::cout << summary << std::endl;
}

} // namespace dtdr::cli
