#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <utility>
#include <vector>

namespace dtdr {

using row_matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Virtual-node states: one row per input step, columns are all nodes of layer 1, then layer 2, ...
class state_matrix {
public:
    state_matrix() = default;
    state_matrix(Eigen::Index rows, std::vector<int> layer_sizes);
    state_matrix(row_matrix entries, std::vector<int> layer_sizes);

    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }
    const row_matrix& entries() const { return entries_; }
    row_matrix& entries() { return entries_; }
    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    int n_layers() const { return static_cast<int>(layer_sizes_.size()); }

    /// Column of node `node` in 0-based `layer`.
    Eigen::Index column(int layer, int node) const;
    /// Inverse of column().
    std::pair<int, int> node_of(Eigen::Index col) const;
    /// Columns belonging to one layer, all rows.
    auto layer_block(int layer) const
    {
        return entries_.middleCols(layer_offset_.at(static_cast<std::size_t>(layer)),
                                   layer_sizes_.at(static_cast<std::size_t>(layer)));
    }
    /// Rows [first, first + count) as a new matrix with the same column map.
    state_matrix row_slice(Eigen::Index first, Eigen::Index count) const;

    bool operator==(const state_matrix& o) const
    {
        return layer_sizes_ == o.layer_sizes_ && entries_.rows() == o.entries_.rows() &&
               entries_.cols() == o.entries_.cols() && entries_ == o.entries_;
    }

private:
    void build_offsets();

    row_matrix entries_;
    std::vector<int> layer_sizes_;
    std::vector<Eigen::Index> layer_offset_;
};

// Binary: magic "DTDRSM01", u64 rows, u64 cols, u64 n_layers, u64 n_nodes per layer, row-major f64.
void write_binary(const state_matrix& m, const std::filesystem::path& path);
state_matrix read_state_matrix(const std::filesystem::path& path);
/// Header "L1N0,L1N1,...", one row per input step.
void write_csv(const state_matrix& m, const std::filesystem::path& path);

} // namespace dtdr
