#include "dtdr/timeseries.hpp"

#include "dtdr/error.hpp"
#include "dtdr/io_util.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dtdr {

timeseries::timeseries(std::size_t dim, double sample_interval)
    : dim_(dim), sample_interval_(sample_interval)
{
    if (dim == 0)
        throw argument_error("timeseries dimension must be >= 1");
    if (!(sample_interval > 0.0))
        throw argument_error("timeseries sample_interval must be > 0");
}

timeseries timeseries::scalar(std::vector<double> values, double sample_interval)
{
    timeseries ts(1, sample_interval);
    ts.data_ = std::move(values);
    return ts;
}

void timeseries::push_back(std::span<const double> v)
{
    if (v.size() != dim_)
        throw argument_error("sample dimension mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
}

timeseries timeseries::component(std::size_t c) const
{
    if (c >= dim_)
        throw argument_error("component index out of range");
    timeseries out(1, sample_interval_);
    out.data_ = column(c);
    if (!norm_.is_identity())
        out.norm_ = {{norm_.offset[c]}, {norm_.scale[c]}};
    return out;
}

timeseries timeseries::slice(std::size_t first, std::size_t count) const
{
    if (first + count > size())
        throw argument_error("slice beyond series end");
    timeseries out(dim_, sample_interval_);
    out.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                     data_.begin() + static_cast<std::ptrdiff_t>((first + count) * dim_));
    out.norm_ = norm_;
    return out;
}

std::vector<double> timeseries::column(std::size_t c) const
{
    std::vector<double> out(size());
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = data_[n * dim_ + c];
    return out;
}

void timeseries::check_finite() const
{
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!std::isfinite(data_[i]))
            throw argument_error("non-finite sample at index " + std::to_string(i / dim_));
    for (double s : norm_.scale)
        if (!(s > 0.0))
            throw argument_error("normalization scale must be > 0");
}

double mean(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v)
{
    if (v.empty())
        return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

timeseries standardize(const timeseries& series)
{
    if (series.empty())
        throw argument_error("cannot standardize an empty series");
    normalization norm;
    for (std::size_t c = 0; c < series.dim(); ++c) {
        const auto col = series.column(c);
        const double sd = stddev(col);
        if (!(sd > 0.0) || !std::isfinite(sd))
            throw degenerate_error("component " + std::to_string(c) + " has zero variance");
        norm.offset.push_back(mean(col));
        norm.scale.push_back(sd);
    }
    return apply_normalization(series, norm);
}

timeseries apply_normalization(const timeseries& series, const normalization& norm)
{
    if (norm.offset.size() != series.dim() || norm.scale.size() != series.dim())
        throw argument_error("normalization dimension mismatch");
    timeseries out(series.dim(), series.sample_interval());
    out.reserve(series.size());
    std::vector<double> buf(series.dim());
    for (std::size_t n = 0; n < series.size(); ++n) {
        for (std::size_t c = 0; c < series.dim(); ++c)
            buf[c] = (series(n, c) - norm.offset[c]) / norm.scale[c];
        out.push_back(buf);
    }
    out.set_norm(norm);
    return out;
}

timeseries destandardize(const timeseries& series)
{
    const auto& norm = series.norm();
    timeseries out(series.dim(), series.sample_interval());
    if (norm.is_identity()) {
        out = series;
        return out;
    }
    out.reserve(series.size());
    std::vector<double> buf(series.dim());
    for (std::size_t n = 0; n < series.size(); ++n) {
        for (std::size_t c = 0; c < series.dim(); ++c)
            buf[c] = series(n, c) * norm.scale[c] + norm.offset[c];
        out.push_back(buf);
    }
    return out;
}

namespace {

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ';';
        s += format_double(v[i]);
    }
    return s;
}

std::vector<double> split_doubles(const std::string& s, char sep)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

} // namespace

void write_csv(const timeseries& series, const std::filesystem::path& path,
               const std::vector<std::string>& column_names)
{
    atomic_file f(path);
    auto& out = f.stream();
    out << "# sample_interval=" << format_double(series.sample_interval()) << '\n';
    if (!series.norm().is_identity()) {
        out << "# offset=" << join(series.norm().offset) << '\n';
        out << "# scale=" << join(series.norm().scale) << '\n';
    }
    for (std::size_t c = 0; c < series.dim(); ++c) {
        if (c)
            out << ',';
        if (c < column_names.size())
            out << column_names[c];
        else
            out << 'x' << c;
    }
    out << '\n';
    for (std::size_t n = 0; n < series.size(); ++n) {
        for (std::size_t c = 0; c < series.dim(); ++c) {
            if (c)
                out << ',';
            out << format_double(series(n, c));
        }
        out << '\n';
    }
    f.commit();
}

timeseries read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open " + path.string());
    double interval = 1.0;
    normalization norm;
    std::string line;
    bool header_seen = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            if (key == "sample_interval")
                interval = std::stod(value);
            else if (key == "offset")
                norm.offset = split_doubles(value, ';');
            else if (key == "scale")
                norm.scale = split_doubles(value, ';');
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        try {
            rows.push_back(split_doubles(line, ','));
        } catch (const std::exception&) {
            throw io_error(path.string() + ": malformed row '" + line + "'");
        }
    }
    if (rows.empty())
        throw io_error(path.string() + ": no samples");
    timeseries ts(rows.front().size(), interval);
    ts.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.size() != ts.dim())
            throw io_error(path.string() + ": ragged rows");
        ts.push_back(r);
    }
    if (!norm.offset.empty())
        ts.set_norm(std::move(norm));
    return ts;
}

void write_binary(const timeseries& series, const std::filesystem::path& path)
{
    atomic_file f(path, true);
    auto& out = f.stream();
    out.write("DTDRTS01", 8);
    binio::put<std::uint64_t>(out, series.size());
    binio::put<std::uint64_t>(out, series.dim());
    binio::put<double>(out, series.sample_interval());
    const bool has_norm = !series.norm().is_identity();
    binio::put<std::uint8_t>(out, has_norm ? 1 : 0);
    if (has_norm) {
        for (double v : series.norm().offset)
            binio::put(out, v);
        for (double v : series.norm().scale)
            binio::put(out, v);
    }
    for (std::size_t c = 0; c < series.dim(); ++c) {
        const auto col = series.column(c);
        out.write(reinterpret_cast<const char*>(col.data()),
                  static_cast<std::streamsize>(col.size() * sizeof(double)));
    }
    f.commit();
}

timeseries read_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());
    binio::expect_magic(in, "DTDRTS01", path);
    const auto n = binio::get<std::uint64_t>(in);
    const auto dim = binio::get<std::uint64_t>(in);
    const auto interval = binio::get<double>(in);
    const auto has_norm = binio::get<std::uint8_t>(in);
    binio::check_stream(in, path);
    if (dim == 0 || dim > 1024)
        throw io_error(path.string() + ": implausible dimension");
    normalization norm;
    if (has_norm) {
        norm.offset.resize(dim);
        norm.scale.resize(dim);
        for (auto& v : norm.offset)
            v = binio::get<double>(in);
        for (auto& v : norm.scale)
            v = binio::get<double>(in);
    }
    std::vector<std::vector<double>> cols(dim, std::vector<double>(n));
    for (auto& col : cols)
        in.read(reinterpret_cast<char*>(col.data()), static_cast<std::streamsize>(n * sizeof(double)));
    binio::check_stream(in, path);
    timeseries ts(dim, interval);
    ts.reserve(n);
    std::vector<double> buf(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < dim; ++c)
            buf[c] = cols[c][i];
        ts.push_back(buf);
    }
    if (has_norm)
        ts.set_norm(std::move(norm));
    return ts;
}

} // namespace dtdr
