#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace dtdr {

/// Affine map from original units to stored units: stored = (orig - offset) / scale.
struct normalization {
    std::vector<double> offset;
    std::vector<double> scale;

    bool is_identity() const { return offset.empty(); }
    bool operator==(const normalization&) const = default;
};

/// Equally spaced samples of a d-dimensional signal, stored sample-major.
class timeseries {
public:
    timeseries() = default;
    timeseries(std::size_t dim, double sample_interval);
    /// Scalar series from values.
    static timeseries scalar(std::vector<double> values, double sample_interval = 1.0);

    std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
    bool empty() const { return data_.empty(); }
    std::size_t dim() const { return dim_; }
    double sample_interval() const { return sample_interval_; }

    std::span<const double> sample(std::size_t n) const { return {data_.data() + n * dim_, dim_}; }
    std::span<double> sample(std::size_t n) { return {data_.data() + n * dim_, dim_}; }
    double operator()(std::size_t n, std::size_t c = 0) const { return data_[n * dim_ + c]; }
    double& operator()(std::size_t n, std::size_t c = 0) { return data_[n * dim_ + c]; }

    void push_back(std::span<const double> v);
    void push_back(double v) { push_back(std::span<const double>(&v, 1)); }
    void reserve(std::size_t n) { data_.reserve(n * dim_); }

    /// One component as its own scalar series (normalization carried over).
    timeseries component(std::size_t c) const;
    /// Samples [first, first + count).
    timeseries slice(std::size_t first, std::size_t count) const;
    std::vector<double> column(std::size_t c) const;

    const std::vector<double>& data() const { return data_; }
    const normalization& norm() const { return norm_; }
    void set_norm(normalization n) { norm_ = std::move(n); }

    /// Throws argument_error on NaN/inf samples or non-positive scale.
    void check_finite() const;

    bool operator==(const timeseries&) const = default;

private:
    std::size_t dim_ = 0;
    double sample_interval_ = 1.0;
    std::vector<double> data_;
    normalization norm_;
};

/// Per-component zero mean and unit variance (population variance).
/// The applied (offset, scale) is recorded on the result.
timeseries standardize(const timeseries& series);

/// Applies the recorded normalization to new data in original units.
timeseries apply_normalization(const timeseries& series, const normalization& norm);

/// Maps a standardized series back to original units and clears the record.
timeseries destandardize(const timeseries& series);

double mean(std::span<const double> v);
/// Population standard deviation.
double stddev(std::span<const double> v);

// CSV: comment lines "# sample_interval=...", "# offset=a;b", "# scale=a;b", a header row, then one
// row per sample. Binary: magic "DTDRTS01", u64 n, u64 dim, f64 interval, u8 has_norm, offsets and
// scales when present, then one contiguous f64 column per component. Little-endian.
void write_csv(const timeseries& series, const std::filesystem::path& path,
               const std::vector<std::string>& column_names = {});
timeseries read_csv(const std::filesystem::path& path);
void write_binary(const timeseries& series, const std::filesystem::path& path);
timeseries read_binary(const std::filesystem::path& path);

} // namespace dtdr
