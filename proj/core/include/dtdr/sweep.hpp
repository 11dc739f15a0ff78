#pragma once

#include "dtdr/network.hpp"
#include "dtdr/params.hpp"
#include "dtdr/task.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace dtdr {

enum class point_status { ok, blowup, degenerate, training_failed, invalid };

std::string to_string(point_status s);

struct sweep_row {
    /// One value per axis, in axis order.
    std::vector<double> coords;
    double nmse_test = std::numeric_limits<double>::quiet_NaN();
    double nmse_train = std::numeric_limits<double>::quiet_NaN();
    double chosen_ridge = std::numeric_limits<double>::quiet_NaN();
    point_status status = point_status::ok;
    std::string message;
    double wall_seconds = 0.0;
};

struct sweep_result {
    std::vector<grid_axis> axes;
    /// Cartesian grid order, last axis fastest.
    std::vector<sweep_row> rows;
    std::uint64_t base_digest = 0;
    std::uint64_t seed = 0;
    int parallelism = 1;
    double wall_seconds = 0.0;

    /// Row with the lowest test NMSE among successful points; rows.size() if none succeeded.
    std::size_t best() const;
};

/// Digest of the canonical network serialization.
std::uint64_t config_digest(const network_config& config);

using progress_fn = std::function<void(std::size_t done, std::size_t total)>;

/// Evaluates every Cartesian point of up to three axes on a shared prepared task. Points run on
/// `parallelism` workers; a failing point is recorded in its row and the sweep continues.
sweep_result run_grid(const network_config& base, const prepared_task& task, const std::vector<grid_axis>& axes,
                      int parallelism = 1, const progress_fn& progress = {});

/// Columns: one per axis path, then nmse_test, nmse_train, chosen_ridge, status, wall_seconds.
void write_sweep_csv(const sweep_result& r, const std::filesystem::path& path);
/// Two-axis sweeps only: (axis1, axis2, nmse).
void write_heatmap_csv(const sweep_result& r, const std::filesystem::path& path);
std::string sweep_json(const sweep_result& r, const std::string& base_config_text);

struct topology_entry {
    std::string name;
    network_config config;
};

struct topology_result {
    std::string name;
    int layers = 0;
    int total_nodes = 0;
    double nmse_test = std::numeric_limits<double>::quiet_NaN();
    double nmse_train = std::numeric_limits<double>::quiet_NaN();
    point_status status = point_status::ok;
    std::string message;
    /// 1 = lowest test NMSE; 0 for failed entries.
    int rank = 0;
};

struct comparison_report {
    std::vector<topology_result> entries;
    bool budget_matched = true;
};

/// Runs each topology on the same task. With enforce_budget, differing total node counts are a
/// config_error.
comparison_report compare_topologies(const std::vector<topology_entry>& specs, const prepared_task& task,
                                     bool enforce_budget = true, int parallelism = 1);

std::string comparison_json(const comparison_report& r);
void write_comparison_csv(const comparison_report& r, const std::filesystem::path& path);

} // namespace dtdr
