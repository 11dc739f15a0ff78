#include "dtdr/config.hpp"

#include "dtdr/error.hpp"

#include <map>

namespace dtdr {

namespace {

// Shared blocks. Mackey-Glass runs inject 0.2 + 0.01 * standardized input; the small amplitude
// keeps the sin^2 nonlinearity near its operating point.
const char* const mg_task = R"(
[task]
system = mackey_glass
n_train = 5000
n_test = 5000
input_offset = 0.2
input_scale = 0.01
)";

const char* const mg_two_layer = R"(
[network]
layers = 2
layers.*.tau_fast = 0.6e-3
layers.*.tau_delay = 12
layers.*.bias = 0.2
layers.*.n_nodes = 600
layers.1.beta = 1.4
layers.1.input_gain = 8
layers.2.beta = 1.2
layers.2.delta_slow = 0.01
)";

std::string lz_task(const std::string& ridge)
{
    return R"(
[task]
system = lorenz
delta_n = 1
n_train = 5000
n_test = 5000
input_offset = 0.3
input_scale = 0.02

[train]
ridge_grid = )" + ridge + "\n";
}

// Input layer followed by band-pass layers, all with the same node count.
std::string lz_network(int depth, int nodes, const std::string& tau_delay, const std::string& w)
{
    std::string s = "\n[network]\nlayers = " + std::to_string(depth) + "\n";
    s += "layers.*.n_nodes = " + std::to_string(nodes) + "\n";
    s += "layers.*.tau_delay = " + tau_delay + "\nlayers.*.bias = 0.2\n";
    s += "layers.1.beta = 1.5\nlayers.1.tau_fast = 0.006\nlayers.1.input_gain = 8\n";
    for (int k = 2; k <= depth; ++k) {
        const std::string l = "layers." + std::to_string(k) + ".";
        s += l + "beta = 1.2\n" + l + "tau_fast = 0.007\n" + l + "delta_slow = 0.01\n" + l + "w_from_prev = " + w + "\n";
    }
    return s;
}

std::string table1(int depth)
{
    return lz_task("1e-3") + lz_network(depth, 1200 / depth, "4", "1.1");
}

std::map<std::string, std::string> build()
{
    std::map<std::string, std::string> p;

    p["fig2"] = std::string(mg_task) + R"(delta_n = 1

[network]
layers = 3
layers.*.tau_delay = 17.85
layers.*.bias = 0.2
layers.*.n_nodes = 600
layers.1.beta = 1.4
layers.1.tau_fast = 6e-3
layers.1.input_gain = 8
layers.2.beta = 1.1
layers.2.tau_fast = 7e-3
layers.2.delta_slow = 0.01
layers.2.w_from_prev = 0.7
layers.3.beta = 1.1
layers.3.tau_fast = 7e-3
layers.3.delta_slow = 0.01
layers.3.w_from_prev = 0.8
)";

    const std::string beta_plane = R"(
[sweep]
axes.1.path = layers.1.beta
axes.1.values = linspace(0.9, 1.9, 11)
axes.2.path = layers.2.beta
axes.2.values = linspace(0.9, 1.9, 11)
)";

    p["fig3a"] = std::string(mg_task) + "delta_n = 34\n" + mg_two_layer + R"(layers.2.input_gain = 8
gating_override = true
)" + beta_plane;

    p["fig3b"] = std::string(mg_task) + "delta_n = 34\n" + mg_two_layer + R"(layers.2.w_from_prev = 0.7
layers.1.w_from_next = 0.6
)" + beta_plane;

    p["fig3c"] = std::string(mg_task) + "delta_n = 34\n" + mg_two_layer + R"(layers.2.w_from_prev = 1.4

[sweep]
axes.1.path = layers.2.w_from_prev
axes.1.values = linspace(0, 2, 11)
axes.2.path = layers.1.w_from_next
axes.2.values = linspace(0, 1, 11)
)";

    p["mg84"] = std::string(mg_task) + "delta_n = 84\n" + mg_two_layer + "layers.2.w_from_prev = 1.4\n";

    p["table1-1"] = table1(1);
    p["table1-2"] = table1(2);
    p["table1-3"] = table1(3) + R"(
[compare]
presets = table1-1, table1-2, table1-3
)";

    // Closed-loop presets: the deep three-layer network and its first layer on its own. The Lorenz
    // closed loop uses a longer delay and a stronger ridge than the open-loop table.
    p["fig4-lz"] = lz_task("1e-2") + lz_network(3, 400, "8", "1.5");
    p["fig4-lz-single"] = lz_task("1e-2") + lz_network(1, 400, "8", "1.5");

    const std::string mg_deep = std::string(mg_task) + R"(delta_n = 1

[network]
layers = 3
layers.*.tau_fast = 0.6e-3
layers.*.tau_delay = 12
layers.*.bias = 0.2
layers.*.n_nodes = 600
layers.1.beta = 1.4
layers.1.input_gain = 8
layers.2.beta = 1.2
layers.2.delta_slow = 0.01
layers.2.w_from_prev = 1.4
layers.3.beta = 1.2
layers.3.delta_slow = 0.01
layers.3.w_from_prev = 1.4
)";
    p["fig4-mg"] = mg_deep;
    p["fig4-mg-single"] = std::string(mg_task) + R"(delta_n = 1

[network]
layers = 1
layers.1.tau_fast = 0.6e-3
layers.1.tau_delay = 12
layers.1.bias = 0.2
layers.1.n_nodes = 600
layers.1.beta = 1.4
layers.1.input_gain = 8
)";
    return p;
}

const std::map<std::string, std::string>& table()
{
    static const auto t = build();
    return t;
}

} // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : table())
            n.push_back(k);
        return n;
    }();
    return names;
}

const std::string& preset_text(const std::string& name)
{
    const auto it = table().find(name);
    if (it == table().end())
        throw config_error("unknown preset '" + name + "'");
    return it->second;
}

} // namespace dtdr
