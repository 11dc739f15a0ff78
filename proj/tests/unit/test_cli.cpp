#include "dtdr/config.hpp"

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* const small_config = R"(seed = 3

[task]
n_train = 400
n_test = 200
input_offset = 0.2
input_scale = 0.1

[network]
layers = 2
washout_steps = 20
layers.*.n_nodes = 16
layers.*.tau_delay = 2
layers.*.tau_fast = 0.05
layers.1.beta = 1.2
layers.1.input_gain = 1
layers.2.beta = 1.1
layers.2.delta_slow = 0.05
layers.2.w_from_prev = 0.8

[eval]
warmup_steps = 50
n_steps = 150
)";

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("dtdr_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

/// Runs the CLI with output captured to `log`; returns the exit status.
int run(const std::string& args, const fs::path& log)
{
    const std::string cmd = std::string("\"") + DTDR_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

} // namespace

TEST_CASE("generate propagates the constant-1 fixed point", "[cli]")
{
    const auto dir = scratch("generate");
    write(dir / "c.cfg", std::string(small_config) +
                             "[task]\nmackey_glass.history = constant\nmackey_glass.history_value = 1\n");
    REQUIRE(run("generate --config " + (dir / "c.cfg").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
    std::ifstream in(dir / "out" / "series.csv");
    std::string line;
    while (std::getline(in, line) && line.starts_with('#')) {
    }
    CHECK(line == "x");
    int n = 0;
    while (std::getline(in, line)) {
        CHECK(std::stod(line) == 1.0);
        ++n;
    }
    CHECK(n == 20 + 400 + 200 + 1);
    CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("train writes its file set and a summary line", "[cli]")
{
    const auto dir = scratch("train");
    write(dir / "c.cfg", small_config);
    REQUIRE(run("train --config " + (dir / "c.cfg").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
    for (const char* f : {"states_meta.json", "weights.bin", "report.json", "prediction.csv", "manifest.json"})
        CHECK(fs::exists(dir / "out" / f));
    CHECK_FALSE(fs::exists(dir / "out" / "states.bin"));
    CHECK(slurp(dir / "log").find("train: nmse_test=") != std::string::npos);

    const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
    CHECK(m["command"] == "train");
    CHECK(m["seeds"]["root"] == 3);
    CHECK(m.contains("tool_version"));
    CHECK(m.contains("host"));
    // the recorded config reproduces the run
    CHECK(dtdr::same_config(dtdr::parse_config(m["config"].get<std::string>()), dtdr::parse_config(small_config)));
}

TEST_CASE("Reruns with the same config and seed are byte-identical", "[cli][property]")
{
    const auto dir = scratch("rerun");
    write(dir / "c.cfg", small_config);
    const auto cfg = (dir / "c.cfg").string();
    for (const char* out : {"a", "b"}) {
        REQUIRE(run("train --config " + cfg + " --out " + (dir / out / "train").string(), dir / "log") == 0);
        REQUIRE(run("autonomous --config " + cfg + " --out " + (dir / out / "auto").string(), dir / "log") == 0);
    }
    for (const char* f : {"train/prediction.csv", "train/report.json", "train/weights.bin", "auto/autonomous.csv",
                          "auto/divergence.csv", "auto/autonomy.json"}) {
        INFO(f);
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    CHECK(slurp(dir / "log").find("autonomous: valid_time=") != std::string::npos);

    REQUIRE(run("train --config " + cfg + " --seed 4 --out " + (dir / "c").string(), dir / "log") == 0);
    CHECK(slurp(dir / "a" / "train" / "prediction.csv") != slurp(dir / "c" / "prediction.csv"));
}

TEST_CASE("Input files are not modified", "[cli][property]")
{
    const auto dir = scratch("readonly");
    write(dir / "c.cfg", small_config);
    const auto before = slurp(dir / "c.cfg");
    REQUIRE(run("generate --config " + (dir / "c.cfg").string() + " --out " + (dir / "out").string(), dir / "log") == 0);
    CHECK(slurp(dir / "c.cfg") == before);
}

TEST_CASE("Exit codes follow the contract", "[cli]")
{
    const auto dir = scratch("codes");
    write(dir / "bad.cfg", std::string(small_config) + "[network]\nlayers.2.input_gain = 8\n");
    CHECK(run("train --config " + (dir / "bad.cfg").string() + " --out " + (dir / "x").string(), dir / "log") == 2);
    CHECK(slurp(dir / "log").find("layers.2.input_gain") != std::string::npos);
    CHECK(run("train --preset nope --out " + (dir / "x").string(), dir / "log") == 2);
    CHECK(run("frobnicate", dir / "log") == 2);

    write(dir / "good.cfg", small_config);
    write(dir / "blocker", "not a directory");
    CHECK(run("generate --config " + (dir / "good.cfg").string() + " --out " + (dir / "blocker" / "out").string(),
              dir / "log") == 4);

    write(dir / "stiff.cfg", std::string(small_config) + "[task]\nsystem = lorenz\nlorenz.sample_interval = 1\n"
                                                          "lorenz.substeps_per_sample = 1\n");
    CHECK(run("generate --config " + (dir / "stiff.cfg").string() + " --out " + (dir / "y").string(), dir / "log") == 3);
}

TEST_CASE("Shipped preset files match the built-in presets", "[cli]")
{
    const auto dir = scratch("presets");
    REQUIRE(run("presets --dump " + (dir / "dump").string(), dir / "log") == 0);
    const fs::path shipped = DTDR_PRESETS_DIR;
    for (const auto& name : dtdr::preset_names()) {
        INFO(name);
        const auto file = name + ".cfg";
        REQUIRE(fs::exists(shipped / file));
        CHECK(slurp(shipped / file) == slurp(dir / "dump" / file));
        CHECK_NOTHROW(dtdr::parse_config(slurp(shipped / file)));
    }
}
