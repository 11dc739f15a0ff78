#include "dtdr/params.hpp"

#include "dtdr/error.hpp"

#include <charconv>
#include <cmath>

namespace dtdr {

namespace {

struct resolved {
    double* real = nullptr;
    int* integer = nullptr;
};

std::vector<std::string_view> split_path(std::string_view path)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        parts.push_back(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return parts;
}

resolved layer_field(layer_config& l, std::string_view f)
{
    if (f == "beta") return {&l.beta};
    if (f == "tau_fast") return {&l.tau_fast};
    if (f == "delta_slow") return {&l.delta_slow};
    if (f == "tau_delay") return {&l.tau_delay};
    if (f == "bias") return {&l.bias};
    if (f == "n_nodes") return {nullptr, &l.n_nodes};
    if (f == "input_gain") return {&l.input_gain};
    if (f == "w_from_prev") return {&l.w_from_prev};
    if (f == "w_from_next") return {&l.w_from_next};
    if (f == "initial_state") return {&l.initial_state};
    return {};
}

resolved resolve(network_config& c, std::string_view path)
{
    const auto parts = split_path(path);
    if (parts.size() == 1) {
        if (parts[0] == "substeps_per_node") return {nullptr, &c.substeps_per_node};
        if (parts[0] == "washout_steps") return {nullptr, &c.washout_steps};
        return {};
    }
    if (parts.size() == 2 && parts[0] == "mask" && parts[1] == "hold_fraction")
        return {&c.mask.hold_fraction};
    if (parts.size() == 3 && parts[0] == "layers") {
        std::size_t k = 0;
        const auto [ptr, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), k);
        if (ec != std::errc{} || ptr != parts[1].data() + parts[1].size() || k < 1 || k > c.layers.size())
            return {};
        return layer_field(c.layers[k - 1], parts[2]);
    }
    return {};
}

} // namespace

const std::vector<std::string>& layer_field_names()
{
    static const std::vector<std::string> names{"beta",       "tau_fast",   "delta_slow",  "tau_delay",
                                                "bias",       "n_nodes",    "input_gain",  "w_from_prev",
                                                "w_from_next", "initial_state"};
    return names;
}

bool is_parameter_path(const network_config& config, std::string_view path)
{
    auto copy = config;
    const auto r = resolve(copy, path);
    return r.real || r.integer;
}

double get_parameter(const network_config& config, std::string_view path)
{
    auto copy = config;
    const auto r = resolve(copy, path);
    if (r.real)
        return *r.real;
    if (r.integer)
        return *r.integer;
    throw config_error("unknown parameter path '" + std::string(path) + "'");
}

void set_parameter(network_config& config, std::string_view path, double value)
{
    const auto r = resolve(config, path);
    if (r.real) {
        *r.real = value;
        return;
    }
    if (r.integer) {
        if (value != std::floor(value) || std::abs(value) > 1e9)
            throw config_error("parameter '" + std::string(path) + "' needs an integer value");
        *r.integer = static_cast<int>(value);
        if (path.ends_with("n_nodes") && path.starts_with("layers.1."))
            config.mask.values.clear();
        return;
    }
    throw config_error("unknown parameter path '" + std::string(path) + "'");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1)
        throw argument_error("linspace: n must be >= 1");
    if (n == 1)
        return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    v.back() = hi;
    return v;
}

} // namespace dtdr
