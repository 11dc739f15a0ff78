#include "dtdr/config.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/seed.hpp"
#include "dtdr/version.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace dtdr {

std::string_view version()
{
    return DTDR_VERSION;
}

void experiment_config::apply_seeds()
{
    network.mask.seed = mask_seed.value_or(derive_seed(seed, "mask"));
    task.mackey_glass.history.seed = history_seed.value_or(derive_seed(seed, "history"));
    task.train.seed = seed;
    network.seed = seed;
}

std::vector<std::string> experiment_config::validation_errors() const
{
    std::vector<std::string> errs;
    for (const auto& e : network.validation_errors())
        errs.push_back("network." + e);
    for (const auto& e : task.validation_errors())
        errs.push_back(e);
    if (eval.embedding.dimension < 1)
        errs.emplace_back("eval.embedding.dimension: must be >= 1");
    if (eval.embedding.lag < 1)
        errs.emplace_back("eval.embedding.lag: must be >= 1");
    if (!(eval.threshold_fraction > 0.0 && eval.threshold_fraction < 1.0))
        errs.emplace_back("eval.threshold_fraction: must lie in (0, 1)");
    if (eval.warmup_steps < 1)
        errs.emplace_back("eval.warmup_steps: must be >= 1");
    if (eval.n_steps < 1)
        errs.emplace_back("eval.n_steps: must be >= 1");
    if (!(eval.run.escape_factor > 0.0))
        errs.emplace_back("eval.escape_factor: must be > 0");
    if (sweep.parallelism < 1)
        errs.emplace_back("sweep.parallelism: must be >= 1");
    if (sweep.axes.size() > 3)
        errs.emplace_back("sweep.axes: at most 3 axes");
    for (std::size_t i = 0; i < sweep.axes.size(); ++i) {
        const auto& ax = sweep.axes[i];
        const std::string p = "sweep.axes." + std::to_string(i + 1);
        if (!is_parameter_path(network, ax.parameter_path))
            errs.push_back(p + ".path: '" + ax.parameter_path + "' does not name a network parameter");
        if (ax.values.empty())
            errs.push_back(p + ".values: must be non-empty");
    }
    const auto& names = preset_names();
    for (const auto& name : compare.presets)
        if (std::find(names.begin(), names.end(), name) == names.end())
            errs.push_back("compare.presets: unknown preset '" + name + "'");
    return errs;
}

namespace {

struct entry {
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(std::string s)
{
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::vector<entry> tokenize(const std::string& text, std::vector<std::string>& errs)
{
    std::vector<entry> out;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errs.push_back("line " + std::to_string(line_no) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        out.push_back({section.empty() ? key : section + "." + key, trim(line.substr(eq + 1)), line_no});
    }
    return out;
}

struct value_error {
    std::string what;
};

double to_double(const std::string& s)
{
    if (s.empty())
        throw value_error{"expected a number"};
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v))
        throw value_error{"expected a finite number, got '" + s + "'"};
    return v;
}

long to_int(const std::string& s)
{
    const double v = to_double(s);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw value_error{"expected an integer, got '" + s + "'"};
    return static_cast<long>(v);
}

std::uint64_t to_u64(const std::string& s)
{
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw value_error{"expected a non-negative integer, got '" + s + "'"};
    return std::stoull(s);
}

bool to_bool(const std::string& s)
{
    if (s == "true" || s == "yes" || s == "1")
        return true;
    if (s == "false" || s == "no" || s == "0")
        return false;
    throw value_error{"expected true or false, got '" + s + "'"};
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

std::vector<double> to_list(const std::string& s)
{
    if (s.starts_with("linspace(") && s.ends_with(")")) {
        const auto args = split_list(s.substr(9, s.size() - 10));
        if (args.size() != 3)
            throw value_error{"linspace takes (lo, hi, n)"};
        const long n = to_int(args[2]);
        if (n < 1)
            throw value_error{"linspace needs n >= 1"};
        return linspace(to_double(args[0]), to_double(args[1]), static_cast<int>(n));
    }
    std::vector<double> out;
    for (const auto& item : split_list(s))
        out.push_back(to_double(item));
    if (out.empty())
        throw value_error{"expected a non-empty list"};
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

using setter = std::function<void(experiment_config&, const std::string&)>;

const std::map<std::string, setter>& fixed_keys()
{
    static const std::map<std::string, setter> keys = [] {
        std::map<std::string, setter> k;
        k["seed"] = [](auto& c, const auto& v) { c.seed = to_u64(v); };

        k["task.system"] = [](auto& c, const auto& v) {
            try {
                c.task.system = parse_chaos_system(v);
            } catch (const config_error& e) {
                throw value_error{e.what()};
            }
        };
        k["task.delta_n"] = [](auto& c, const auto& v) { c.task.train.delta_n = static_cast<int>(to_int(v)); };
        k["task.n_train"] = [](auto& c, const auto& v) { c.task.train.n_train = static_cast<int>(to_int(v)); };
        k["task.n_test"] = [](auto& c, const auto& v) { c.task.n_test = static_cast<int>(to_int(v)); };
        k["task.discard"] = [](auto& c, const auto& v) { c.task.discard = to_int(v); };
        k["task.standardize"] = [](auto& c, const auto& v) { c.task.standardize = to_bool(v); };
        k["task.input_offset"] = [](auto& c, const auto& v) { c.task.input_offset = to_double(v); };
        k["task.input_scale"] = [](auto& c, const auto& v) { c.task.input_scale = to_double(v); };

        k["task.mackey_glass.feedback_gain"] = [](auto& c, const auto& v) { c.task.mackey_glass.feedback_gain = to_double(v); };
        k["task.mackey_glass.decay"] = [](auto& c, const auto& v) { c.task.mackey_glass.decay = to_double(v); };
        k["task.mackey_glass.exponent"] = [](auto& c, const auto& v) { c.task.mackey_glass.exponent = to_double(v); };
        k["task.mackey_glass.delay"] = [](auto& c, const auto& v) { c.task.mackey_glass.delay = to_double(v); };
        k["task.mackey_glass.sample_interval"] = [](auto& c, const auto& v) { c.task.mackey_glass.sample_interval = to_double(v); };
        k["task.mackey_glass.substeps_per_sample"] = [](auto& c, const auto& v) {
            c.task.mackey_glass.substeps_per_sample = static_cast<int>(to_int(v));
        };
        k["task.mackey_glass.history"] = [](auto& c, const auto& v) {
            if (v == "constant")
                c.task.mackey_glass.history.type = history_init::kind::constant;
            else if (v == "random")
                c.task.mackey_glass.history.type = history_init::kind::random;
            else
                throw value_error{"expected constant or random"};
        };
        k["task.mackey_glass.history_value"] = [](auto& c, const auto& v) { c.task.mackey_glass.history.value = to_double(v); };
        k["task.mackey_glass.history_spread"] = [](auto& c, const auto& v) { c.task.mackey_glass.history.spread = to_double(v); };
        k["task.mackey_glass.history_seed"] = [](auto& c, const auto& v) { c.history_seed = to_u64(v); };

        k["task.lorenz.sigma"] = [](auto& c, const auto& v) { c.task.lorenz.sigma = to_double(v); };
        k["task.lorenz.rho"] = [](auto& c, const auto& v) { c.task.lorenz.rho = to_double(v); };
        k["task.lorenz.beta"] = [](auto& c, const auto& v) { c.task.lorenz.beta = to_double(v); };
        k["task.lorenz.sample_interval"] = [](auto& c, const auto& v) { c.task.lorenz.sample_interval = to_double(v); };
        k["task.lorenz.substeps_per_sample"] = [](auto& c, const auto& v) {
            c.task.lorenz.substeps_per_sample = static_cast<int>(to_int(v));
        };
        k["task.lorenz.init"] = [](auto& c, const auto& v) {
            const auto l = to_list(v);
            if (l.size() != 3)
                throw value_error{"expected three values"};
            c.task.lorenz.init_state = {l[0], l[1], l[2]};
        };

        k["network.substeps_per_node"] = [](auto& c, const auto& v) { c.network.substeps_per_node = static_cast<int>(to_int(v)); };
        k["network.washout_steps"] = [](auto& c, const auto& v) { c.network.washout_steps = static_cast<int>(to_int(v)); };
        k["network.gating_override"] = [](auto& c, const auto& v) { c.network.gating_override = to_bool(v); };
        k["network.mask.distribution"] = [](auto& c, const auto& v) {
            try {
                c.network.mask.distribution = parse_mask_distribution(v);
            } catch (const config_error& e) {
                throw value_error{e.what()};
            }
        };
        k["network.mask.hold_fraction"] = [](auto& c, const auto& v) { c.network.mask.hold_fraction = to_double(v); };
        k["network.mask.seed"] = [](auto& c, const auto& v) { c.mask_seed = to_u64(v); };
        k["network.mask.values"] = [](auto& c, const auto& v) { c.network.mask.values = to_list(v); };

        k["train.ridge_grid"] = [](auto& c, const auto& v) { c.task.train.ridge_grid = to_list(v); };
        k["train.validation_fraction"] = [](auto& c, const auto& v) { c.task.train.validation_fraction = to_double(v); };
        k["train.include_bias"] = [](auto& c, const auto& v) { c.task.train.include_bias = to_bool(v); };

        k["eval.embedding.dimension"] = [](auto& c, const auto& v) {
            c.eval.embedding.dimension = static_cast<int>(to_int(v));
            c.eval.embedding_set = true;
        };
        k["eval.embedding.lag"] = [](auto& c, const auto& v) {
            c.eval.embedding.lag = static_cast<int>(to_int(v));
            c.eval.embedding_set = true;
        };
        k["eval.threshold_fraction"] = [](auto& c, const auto& v) { c.eval.threshold_fraction = to_double(v); };
        k["eval.warmup_steps"] = [](auto& c, const auto& v) { c.eval.warmup_steps = static_cast<int>(to_int(v)); };
        k["eval.n_steps"] = [](auto& c, const auto& v) { c.eval.n_steps = static_cast<int>(to_int(v)); };
        k["eval.escape_factor"] = [](auto& c, const auto& v) { c.eval.run.escape_factor = to_double(v); };

        k["sweep.parallelism"] = [](auto& c, const auto& v) { c.sweep.parallelism = static_cast<int>(to_int(v)); };
        k["compare.presets"] = [](auto& c, const auto& v) { c.compare.presets = split_list(v); };
        k["compare.enforce_budget"] = [](auto& c, const auto& v) { c.compare.enforce_budget = to_bool(v); };
        return k;
    }();
    return keys;
}

/// Parses "<n>.<rest>" after a prefix; returns 0 when the index is missing or malformed.
std::size_t indexed(const std::string& key, const std::string& prefix, std::string& rest)
{
    if (!key.starts_with(prefix))
        return 0;
    const auto tail = key.substr(prefix.size());
    const auto dot = tail.find('.');
    if (dot == std::string::npos)
        return 0;
    rest = tail.substr(dot + 1);
    const auto idx = tail.substr(0, dot);
    if (idx == "*")
        return static_cast<std::size_t>(-1);
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return 0;
    return std::stoul(idx);
}

class applier {
public:
    applier(experiment_config& c, std::vector<std::string>& errs) : c_(c), errs_(errs) {}

    void apply(const entry& e)
    {
        try {
            apply_or_throw(e);
        } catch (const value_error& v) {
            error(e, v.what);
        } catch (const config_error& v) {
            error(e, v.what());
        }
    }

    void finish()
    {
        if (explicit_layers_ && static_cast<int>(c_.network.layers.size()) != explicit_layers_)
            errs_.push_back("network.layers: " + std::to_string(explicit_layers_) +
                            " layers declared but keys address layer " + std::to_string(c_.network.layers.size()));
    }

private:
    void error(const entry& e, const std::string& what)
    {
        errs_.push_back("line " + std::to_string(e.line) + ": " + e.key + ": " + what);
    }

    void apply_or_throw(const entry& e)
    {
        const auto& fixed = fixed_keys();
        if (const auto it = fixed.find(e.key); it != fixed.end()) {
            it->second(c_, e.value);
            return;
        }
        if (e.key == "network.layers") {
            const long n = to_int(e.value);
            if (n < 1 || n > 64)
                throw value_error{"layer count must lie in [1, 64]"};
            explicit_layers_ = static_cast<int>(n);
            c_.network.layers.resize(static_cast<std::size_t>(n));
            return;
        }
        std::string rest;
        if (const auto k = indexed(e.key, "network.layers.", rest); k != 0) {
            const auto& names = layer_field_names();
            if (std::find(names.begin(), names.end(), rest) == names.end())
                throw value_error{"unknown layer field '" + rest + "'"};
            const double v = to_double(e.value);
            if (k == static_cast<std::size_t>(-1)) {
                for (std::size_t i = 1; i <= c_.network.layers.size(); ++i)
                    set_parameter(c_.network, "layers." + std::to_string(i) + "." + rest, v);
                return;
            }
            if (k > 64)
                throw value_error{"layer index out of range"};
            if (k > c_.network.layers.size())
                c_.network.layers.resize(k);
            set_parameter(c_.network, "layers." + std::to_string(k) + "." + rest, v);
            return;
        }
        if (const auto k = indexed(e.key, "sweep.axes.", rest); k != 0 && k != static_cast<std::size_t>(-1)) {
            if (k > 3)
                throw value_error{"at most 3 sweep axes"};
            if (k > c_.sweep.axes.size())
                c_.sweep.axes.resize(k);
            if (rest == "path")
                c_.sweep.axes[k - 1].parameter_path = e.value;
            else if (rest == "values")
                c_.sweep.axes[k - 1].values = to_list(e.value);
            else
                throw value_error{"unknown axis field '" + rest + "'"};
            return;
        }
        throw value_error{"unknown key"};
    }

    experiment_config& c_;
    std::vector<std::string>& errs_;
    int explicit_layers_ = 0;
};

experiment_config parse_impl(const std::string& text, bool allow_preset, std::vector<std::string>& errs)
{
    const auto entries = tokenize(text, errs);
    experiment_config c;
    for (const auto& e : entries) {
        if (e.key != "preset")
            continue;
        if (!allow_preset) {
            errs.push_back("line " + std::to_string(e.line) + ": presets cannot nest");
            continue;
        }
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), e.value) == names.end()) {
            errs.push_back("line " + std::to_string(e.line) + ": preset: unknown preset '" + e.value + "'");
            continue;
        }
        std::vector<std::string> preset_errs;
        c = parse_impl(preset_text(e.value), false, preset_errs);
        for (const auto& pe : preset_errs)
            errs.push_back("preset " + e.value + ": " + pe);
        c.preset = e.value;
    }
    applier a(c, errs);
    for (const auto& e : entries)
        if (e.key != "preset")
            a.apply(e);
    a.finish();
    return c;
}

} // namespace

experiment_config parse_config(const std::string& text)
{
    std::vector<std::string> errs;
    auto c = parse_impl(text, true, errs);
    c.apply_seeds();
    if (errs.empty())
        errs = c.validation_errors();
    if (!errs.empty()) {
        std::string msg = "config has " + std::to_string(errs.size()) + " error(s):";
        for (const auto& e : errs)
            msg += "\n  " + e;
        throw config_error(msg);
    }
    return c;
}

std::string serialize_network(const network_config& n)
{
    std::ostringstream o;
    o << "layers = " << n.layers.size() << '\n';
    o << "substeps_per_node = " << n.substeps_per_node << '\n';
    o << "washout_steps = " << n.washout_steps << '\n';
    o << "gating_override = " << (n.gating_override ? "true" : "false") << '\n';
    o << "mask.distribution = " << to_string(n.mask.distribution) << '\n';
    o << "mask.hold_fraction = " << format_double(n.mask.hold_fraction) << '\n';
    o << "mask.seed = " << n.mask.seed << '\n';
    if (!n.mask.values.empty())
        o << "mask.values = " << join(n.mask.values) << '\n';
    for (std::size_t i = 0; i < n.layers.size(); ++i) {
        const auto& l = n.layers[i];
        const std::string p = "layers." + std::to_string(i + 1) + ".";
        o << p << "beta = " << format_double(l.beta) << '\n';
        o << p << "tau_fast = " << format_double(l.tau_fast) << '\n';
        o << p << "delta_slow = " << format_double(l.delta_slow) << '\n';
        o << p << "tau_delay = " << format_double(l.tau_delay) << '\n';
        o << p << "bias = " << format_double(l.bias) << '\n';
        o << p << "n_nodes = " << l.n_nodes << '\n';
        o << p << "input_gain = " << format_double(l.input_gain) << '\n';
        o << p << "w_from_prev = " << format_double(l.w_from_prev) << '\n';
        o << p << "w_from_next = " << format_double(l.w_from_next) << '\n';
        o << p << "initial_state = " << format_double(l.initial_state) << '\n';
    }
    return o.str();
}

std::string serialize_config(const experiment_config& c)
{
    std::ostringstream o;
    if (!c.preset.empty())
        o << "# expanded from preset " << c.preset << '\n';
    o << "seed = " << c.seed << "\n\n[task]\n";
    const auto& t = c.task;
    o << "system = " << to_string(t.system) << '\n';
    o << "delta_n = " << t.train.delta_n << '\n';
    o << "n_train = " << t.train.n_train << '\n';
    o << "n_test = " << t.n_test << '\n';
    o << "discard = " << t.discard << '\n';
    o << "standardize = " << (t.standardize ? "true" : "false") << '\n';
    o << "input_offset = " << format_double(t.input_offset) << '\n';
    o << "input_scale = " << format_double(t.input_scale) << '\n';
    const auto& mg = t.mackey_glass;
    o << "mackey_glass.feedback_gain = " << format_double(mg.feedback_gain) << '\n';
    o << "mackey_glass.decay = " << format_double(mg.decay) << '\n';
    o << "mackey_glass.exponent = " << format_double(mg.exponent) << '\n';
    o << "mackey_glass.delay = " << format_double(mg.delay) << '\n';
    o << "mackey_glass.sample_interval = " << format_double(mg.sample_interval) << '\n';
    o << "mackey_glass.substeps_per_sample = " << mg.substeps_per_sample << '\n';
    o << "mackey_glass.history = " << (mg.history.type == history_init::kind::constant ? "constant" : "random") << '\n';
    o << "mackey_glass.history_value = " << format_double(mg.history.value) << '\n';
    o << "mackey_glass.history_spread = " << format_double(mg.history.spread) << '\n';
    if (c.history_seed)
        o << "mackey_glass.history_seed = " << *c.history_seed << '\n';
    const auto& lz = t.lorenz;
    o << "lorenz.sigma = " << format_double(lz.sigma) << '\n';
    o << "lorenz.rho = " << format_double(lz.rho) << '\n';
    o << "lorenz.beta = " << format_double(lz.beta) << '\n';
    o << "lorenz.sample_interval = " << format_double(lz.sample_interval) << '\n';
    o << "lorenz.substeps_per_sample = " << lz.substeps_per_sample << '\n';
    o << "lorenz.init = " << join(std::vector<double>(lz.init_state.begin(), lz.init_state.end())) << '\n';

    o << "\n[network]\n";
    // the mask seed is written only when it was set explicitly
    auto net = serialize_network(c.network);
    if (!c.mask_seed) {
        const auto pos = net.find("mask.seed = ");
        net.erase(pos, net.find('\n', pos) - pos + 1);
    }
    o << net;

    o << "\n[train]\n";
    o << "ridge_grid = " << join(t.train.ridge_grid) << '\n';
    o << "validation_fraction = " << format_double(t.train.validation_fraction) << '\n';
    o << "include_bias = " << (t.train.include_bias ? "true" : "false") << '\n';

    o << "\n[eval]\n";
    if (c.eval.embedding_set) {
        o << "embedding.dimension = " << c.eval.embedding.dimension << '\n';
        o << "embedding.lag = " << c.eval.embedding.lag << '\n';
    }
    o << "threshold_fraction = " << format_double(c.eval.threshold_fraction) << '\n';
    o << "warmup_steps = " << c.eval.warmup_steps << '\n';
    o << "n_steps = " << c.eval.n_steps << '\n';
    o << "escape_factor = " << format_double(c.eval.run.escape_factor) << '\n';

    o << "\n[sweep]\n";
    o << "parallelism = " << c.sweep.parallelism << '\n';
    for (std::size_t i = 0; i < c.sweep.axes.size(); ++i) {
        o << "axes." << i + 1 << ".path = " << c.sweep.axes[i].parameter_path << '\n';
        o << "axes." << i + 1 << ".values = " << join(c.sweep.axes[i].values) << '\n';
    }

    o << "\n[compare]\n";
    if (!c.compare.presets.empty()) {
        o << "presets = ";
        for (std::size_t i = 0; i < c.compare.presets.size(); ++i)
            o << (i ? ", " : "") << c.compare.presets[i];
        o << '\n';
    }
    o << "enforce_budget = " << (c.compare.enforce_budget ? "true" : "false") << '\n';
    return o.str();
}

bool same_config(const experiment_config& a, const experiment_config& b)
{
    return a.seed == b.seed && a.mask_seed == b.mask_seed && a.history_seed == b.history_seed &&
           a.task == b.task && a.network == b.network && a.eval == b.eval && a.sweep == b.sweep &&
           a.compare == b.compare;
}

} // namespace dtdr
