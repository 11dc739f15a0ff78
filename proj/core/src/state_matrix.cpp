#include "dtdr/state_matrix.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"

#include <numeric>

namespace dtdr {

state_matrix::state_matrix(Eigen::Index rows, std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes))
{
    entries_.setZero(rows, std::accumulate(layer_sizes_.begin(), layer_sizes_.end(), Eigen::Index{0}));
    build_offsets();
}

state_matrix::state_matrix(row_matrix entries, std::vector<int> layer_sizes)
    : entries_(std::move(entries)), layer_sizes_(std::move(layer_sizes))
{
    if (std::accumulate(layer_sizes_.begin(), layer_sizes_.end(), Eigen::Index{0}) != entries_.cols())
        throw argument_error("state_matrix: layer sizes do not sum to the column count");
    build_offsets();
}

void state_matrix::build_offsets()
{
    layer_offset_.assign(layer_sizes_.size(), 0);
    for (std::size_t i = 1; i < layer_sizes_.size(); ++i)
        layer_offset_[i] = layer_offset_[i - 1] + layer_sizes_[i - 1];
}

Eigen::Index state_matrix::column(int layer, int node) const
{
    if (layer < 0 || layer >= n_layers() || node < 0 || node >= layer_sizes_[static_cast<std::size_t>(layer)])
        throw argument_error("state_matrix: (layer, node) out of range");
    return layer_offset_[static_cast<std::size_t>(layer)] + node;
}

std::pair<int, int> state_matrix::node_of(Eigen::Index col) const
{
    if (col < 0 || col >= cols())
        throw argument_error("state_matrix: column out of range");
    int layer = n_layers() - 1;
    while (layer_offset_[static_cast<std::size_t>(layer)] > col)
        --layer;
    return {layer, static_cast<int>(col - layer_offset_[static_cast<std::size_t>(layer)])};
}

state_matrix state_matrix::row_slice(Eigen::Index first, Eigen::Index count) const
{
    if (first < 0 || count < 0 || first + count > rows())
        throw argument_error("state_matrix: row slice out of range");
    return state_matrix(entries_.middleRows(first, count), layer_sizes_);
}

void write_binary(const state_matrix& m, const std::filesystem::path& path)
{
    atomic_file f(path, true);
    auto& out = f.stream();
    out.write("DTDRSM01", 8);
    binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    binio::put<std::uint64_t>(out, m.layer_sizes().size());
    for (int n : m.layer_sizes())
        binio::put<std::uint64_t>(out, static_cast<std::uint64_t>(n));
    out.write(reinterpret_cast<const char*>(m.entries().data()),
              static_cast<std::streamsize>(m.entries().size() * static_cast<Eigen::Index>(sizeof(double))));
    f.commit();
}

state_matrix read_state_matrix(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());
    binio::expect_magic(in, "DTDRSM01", path);
    const auto rows = binio::get<std::uint64_t>(in);
    const auto cols = binio::get<std::uint64_t>(in);
    const auto n_layers = binio::get<std::uint64_t>(in);
    binio::check_stream(in, path);
    if (n_layers == 0 || n_layers > 4096)
        throw io_error(path.string() + ": implausible layer count");
    std::vector<int> sizes(n_layers);
    for (auto& s : sizes)
        s = static_cast<int>(binio::get<std::uint64_t>(in));
    row_matrix entries(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    in.read(reinterpret_cast<char*>(entries.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
    binio::check_stream(in, path);
    try {
        return state_matrix(std::move(entries), std::move(sizes));
    } catch (const argument_error& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

void write_csv(const state_matrix& m, const std::filesystem::path& path)
{
    atomic_file f(path);
    auto& out = f.stream();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const auto [layer, node] = m.node_of(c);
        out << (c ? "," : "") << 'L' << layer + 1 << 'N' << node;
    }
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << (c ? "," : "") << format_double(m.entries()(r, c));
        out << '\n';
    }
    f.commit();
}

} // namespace dtdr
