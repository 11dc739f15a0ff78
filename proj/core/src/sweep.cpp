#include "dtdr/sweep.hpp"

#include "dtdr/config.hpp"
#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"
#include "dtdr/seed.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace dtdr {

std::string to_string(point_status s)
{
    switch (s) {
    case point_status::ok: return "ok";
    case point_status::blowup: return "blowup";
    case point_status::degenerate: return "degenerate";
    case point_status::training_failed: return "training_failed";
    case point_status::invalid: return "invalid";
    }
    return "unknown";
}

std::size_t sweep_result::best() const
{
    std::size_t best = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].status != point_status::ok)
            continue;
        if (best == rows.size() || rows[i].nmse_test < rows[best].nmse_test)
            best = i;
    }
    return best;
}

std::uint64_t config_digest(const network_config& config)
{
    return fnv1a64(serialize_network(config));
}

namespace {

using clock_type = std::chrono::steady_clock;

struct point_outcome {
    eval_report report;
    point_status status = point_status::ok;
    std::string message;
};

point_outcome evaluate_point(const network_config& config, const prepared_task& task)
{
    point_outcome o;
    try {
        o.report = run_task(config, task).report;
        if (!std::isfinite(o.report.nmse_test)) {
            o.status = point_status::degenerate;
            o.message = "non-finite test NMSE";
        }
    } catch (const blowup_error& e) {
        o.status = point_status::blowup;
        o.message = e.what();
    } catch (const degenerate_error& e) {
        o.status = point_status::degenerate;
        o.message = e.what();
    } catch (const training_error& e) {
        o.status = point_status::training_failed;
        o.message = e.what();
    } catch (const config_error& e) {
        o.status = point_status::invalid;
        o.message = e.what();
    } catch (const argument_error& e) {
        o.status = point_status::invalid;
        o.message = e.what();
    }
    return o;
}

/// Calls job(i) for i in [0, n) on up to `workers` threads; each index is claimed exactly once.
template <typename Job>
void parallel_for(std::size_t n, int workers, Job&& job)
{
    const auto count = static_cast<std::size_t>(std::max(1, workers));
    if (count == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(count, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                job(i);
        });
}

std::string csv_cell(double v)
{
    return std::isfinite(v) ? format_double(v) : std::string("nan");
}

nlohmann::json number_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

sweep_result run_grid(const network_config& base, const prepared_task& task, const std::vector<grid_axis>& axes,
                      int parallelism, const progress_fn& progress)
{
    if (axes.size() > 3)
        throw argument_error("run_grid: at most 3 axes");
    if (parallelism < 1)
        throw argument_error("run_grid: parallelism must be >= 1");
    for (const auto& ax : axes) {
        if (ax.values.empty())
            throw argument_error("run_grid: axis '" + ax.parameter_path + "' has no values");
        if (!is_parameter_path(base, ax.parameter_path))
            throw argument_error("run_grid: '" + ax.parameter_path + "' does not name a network parameter");
        if (ax.parameter_path == "washout_steps")
            throw argument_error("run_grid: washout_steps is fixed by the prepared task");
    }

    sweep_result r;
    r.axes = axes;
    r.base_digest = config_digest(base);
    r.seed = task.spec.train.seed;
    r.parallelism = parallelism;

    std::size_t total = 1;
    for (const auto& ax : axes)
        total *= ax.values.size();
    r.rows.resize(total);

    std::mutex progress_mutex;
    std::size_t done = 0;
    const auto start = clock_type::now();

    parallel_for(total, parallelism, [&](std::size_t index) {
        auto& row = r.rows[index];
        row.coords.resize(axes.size());
        network_config point = base;
        std::size_t rem = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& vals = axes[a].values;
            row.coords[a] = vals[rem % vals.size()];
            rem /= vals.size();
        }
        const auto t0 = clock_type::now();
        try {
            for (std::size_t a = 0; a < axes.size(); ++a)
                set_parameter(point, axes[a].parameter_path, row.coords[a]);
            const auto o = evaluate_point(point, task);
            row.status = o.status;
            row.message = o.message;
            if (o.status == point_status::ok) {
                row.nmse_test = o.report.nmse_test;
                row.nmse_train = o.report.nmse_train;
                row.chosen_ridge = o.report.chosen_ridge;
            }
        } catch (const error& e) {
            row.status = point_status::invalid;
            row.message = e.what();
        }
        row.wall_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(++done, total);
        }
    });

    r.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    return r;
}

void write_sweep_csv(const sweep_result& r, const std::filesystem::path& path)
{
    std::ostringstream o;
    for (const auto& ax : r.axes)
        o << ax.parameter_path << ',';
    o << "nmse_test,nmse_train,chosen_ridge,status,wall_seconds\n";
    for (const auto& row : r.rows) {
        for (double c : row.coords)
            o << format_double(c) << ',';
        o << csv_cell(row.nmse_test) << ',' << csv_cell(row.nmse_train) << ',' << csv_cell(row.chosen_ridge) << ','
          << to_string(row.status) << ',' << format_double(row.wall_seconds) << '\n';
    }
    write_text_file(path, o.str());
}

void write_heatmap_csv(const sweep_result& r, const std::filesystem::path& path)
{
    if (r.axes.size() != 2)
        throw argument_error("heatmap export needs exactly two axes");
    std::ostringstream o;
    o << r.axes[0].parameter_path << ',' << r.axes[1].parameter_path << ",nmse\n";
    for (const auto& row : r.rows)
        o << format_double(row.coords[0]) << ',' << format_double(row.coords[1]) << ',' << csv_cell(row.nmse_test)
          << '\n';
    write_text_file(path, o.str());
}

std::string sweep_json(const sweep_result& r, const std::string& base_config_text)
{
    nlohmann::json j;
    j["base_config"] = base_config_text;
    j["base_digest"] = r.base_digest;
    j["seed"] = r.seed;
    j["parallelism"] = r.parallelism;
    j["wall_seconds"] = r.wall_seconds;
    j["axes"] = nlohmann::json::array();
    for (const auto& ax : r.axes)
        j["axes"].push_back({{"path", ax.parameter_path}, {"values", ax.values}});
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr{{"coords", row.coords},
                          {"nmse_test", number_or_null(row.nmse_test)},
                          {"nmse_train", number_or_null(row.nmse_train)},
                          {"chosen_ridge", number_or_null(row.chosen_ridge)},
                          {"status", to_string(row.status)},
                          {"wall_seconds", row.wall_seconds}};
        if (!row.message.empty())
            jr["message"] = row.message;
        j["rows"].push_back(std::move(jr));
    }
    if (const auto b = r.best(); b < r.rows.size())
        j["best_row"] = b;
    return j.dump(2) + "\n";
}

comparison_report compare_topologies(const std::vector<topology_entry>& specs, const prepared_task& task,
                                     bool enforce_budget, int parallelism)
{
    if (specs.empty())
        throw argument_error("compare_topologies: no topologies given");
    comparison_report rep;
    rep.entries.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto& e = rep.entries[i];
        e.name = specs[i].name;
        e.layers = static_cast<int>(specs[i].config.layers.size());
        e.total_nodes = specs[i].config.total_nodes();
        if (e.total_nodes != rep.entries.front().total_nodes)
            rep.budget_matched = false;
    }
    if (enforce_budget && !rep.budget_matched) {
        std::string msg = "compare: node budgets differ:";
        for (const auto& e : rep.entries)
            msg += " " + e.name + "=" + std::to_string(e.total_nodes);
        throw config_error(msg);
    }

    parallel_for(specs.size(), parallelism, [&](std::size_t i) {
        const auto o = evaluate_point(specs[i].config, task);
        auto& e = rep.entries[i];
        e.status = o.status;
        e.message = o.message;
        if (o.status == point_status::ok) {
            e.nmse_test = o.report.nmse_test;
            e.nmse_train = o.report.nmse_train;
        }
    });

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rep.entries.size(); ++i)
        if (rep.entries[i].status == point_status::ok)
            order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rep.entries[a].nmse_test < rep.entries[b].nmse_test;
    });
    for (std::size_t k = 0; k < order.size(); ++k)
        rep.entries[order[k]].rank = static_cast<int>(k + 1);
    return rep;
}

std::string comparison_json(const comparison_report& r)
{
    nlohmann::json j;
    j["budget_matched"] = r.budget_matched;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : r.entries) {
        nlohmann::json je{{"name", e.name},
                          {"layers", e.layers},
                          {"total_nodes", e.total_nodes},
                          {"nmse_test", number_or_null(e.nmse_test)},
                          {"nmse_train", number_or_null(e.nmse_train)},
                          {"status", to_string(e.status)},
                          {"rank", e.rank}};
        if (!e.message.empty())
            je["message"] = e.message;
        j["entries"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

void write_comparison_csv(const comparison_report& r, const std::filesystem::path& path)
{
    std::ostringstream o;
    o << "name,layers,total_nodes,nmse_test,nmse_train,status,rank\n";
    for (const auto& e : r.entries)
        o << e.name << ',' << e.layers << ',' << e.total_nodes << ',' << csv_cell(e.nmse_test) << ','
          << csv_cell(e.nmse_train) << ',' << to_string(e.status) << ',' << e.rank << '\n';
    write_text_file(path, o.str());
}

} // namespace dtdr
