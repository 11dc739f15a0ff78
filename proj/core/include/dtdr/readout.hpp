#pragma once

#include "dtdr/state_matrix.hpp"
#include "dtdr/timeseries.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dtdr {

/// {0} and 10^k for k = -12 ... -2.
std::vector<double> default_ridge_grid();

struct train_spec {
    int n_train = 5000;
    /// Prediction horizon: row n is trained towards target sample n + delta_n.
    int delta_n = 1;
    std::vector<double> ridge_grid = default_ridge_grid();
    /// Tail of the training block held out to pick the ridge parameter.
    double validation_fraction = 0.1;
    /// Appends an unregularized constant column.
    bool include_bias = true;
    std::uint64_t seed = 0;

    std::vector<std::string> validation_errors() const;
    bool operator==(const train_spec&) const = default;
};

/// Validation score of one ridge candidate; nmse is NaN when the system was singular.
struct ridge_score {
    double ridge = 0.0;
    double validation_nmse = 0.0;
    bool singular = false;
};

struct readout_weights {
    /// (n_features + include_bias) x n_outputs; the bias row is last.
    Eigen::MatrixXd matrix;
    bool include_bias = true;
    double ridge = 0.0;
    std::uint64_t seed = 0;
    int n_train = 0;
    std::vector<ridge_score> scores;

    Eigen::Index n_features() const { return matrix.rows() - (include_bias ? 1 : 0); }
    Eigen::Index n_outputs() const { return matrix.cols(); }
};

struct eval_report {
    double nmse_train = 0.0;
    double nmse_test = 0.0;
    double chosen_ridge = 0.0;
    int n_test = 0;
};

/// Ridge regression of target(n + delta_n) on state row n over the first n_train rows.
///
/// The Gram matrix is formed once per block and reused across the ridge grid. With a bias the
/// features are centred on the training means, which is the same problem as an unregularized
/// bias column. The ridge value with the lowest NMSE on the validation tail is refitted on the
/// whole training block.
readout_weights train_ridge(const state_matrix& states, const timeseries& target, const train_spec& spec);

/// Linear readout: y(n) = sum over columns of W(c, j) * x_c(n), plus the bias row.
timeseries predict(const state_matrix& states, const readout_weights& weights, double sample_interval = 1.0);

/// Mean squared error over target variance (population), averaged over components.
double nmse(const timeseries& prediction, const timeseries& target);

/// Scores trained weights on rows [0, n_train) and on the rows after the training block,
/// up to n_test of them (all remaining rows with a target when n_test <= 0).
eval_report evaluate_readout(const state_matrix& states, const timeseries& target, const readout_weights& weights,
                             const train_spec& spec, int n_test = 0);

// Binary: magic "DTDRWT01", u64 rows, u64 cols, u8 include_bias, f64 ridge, u64 seed, u64 n_train,
// row-major f64 payload.
void write_binary(const readout_weights& w, const std::filesystem::path& path);
readout_weights read_weights(const std::filesystem::path& path);
/// JSON summary: chosen ridge, shapes, NMSE values and the per-ridge validation scores.
std::string weights_summary_json(const readout_weights& w, const eval_report& report);

} // namespace dtdr
