#include "dtdr/io_util.hpp"

#include "dtdr/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <sstream>
#include <system_error>

namespace dtdr {

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian");

atomic_file::atomic_file(std::filesystem::path target, bool binary)
    : target_(std::move(target))
{
    temp_ = target_;
    temp_ += ".tmp";
    out_.open(temp_, binary ? std::ios::out | std::ios::binary | std::ios::trunc
                            : std::ios::out | std::ios::trunc);
    if (!out_)
        throw io_error("cannot open " + temp_.string() + " for writing");
}

atomic_file::~atomic_file()
{
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(temp_, ec);
    }
}

void atomic_file::commit()
{
    out_.flush();
    if (!out_)
        throw io_error("write failed for " + temp_.string());
    out_.close();
    std::error_code ec;
    std::filesystem::rename(temp_, target_, ec);
    if (ec)
        throw io_error("cannot rename " + temp_.string() + " to " + target_.string() + ": " + ec.message());
    committed_ = true;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    atomic_file f(path);
    f.stream() << text;
    f.commit();
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace binio {

void expect_magic(std::istream& in, std::string_view magic, const std::filesystem::path& path)
{
    std::array<char, 8> buf{};
    in.read(buf.data(), 8);
    if (!in || std::string_view(buf.data(), 8) != magic)
        throw io_error(path.string() + ": missing magic header " + std::string(magic));
}

void check_stream(const std::istream& in, const std::filesystem::path& path)
{
    if (!in)
        throw io_error(path.string() + ": truncated or unreadable file");
}

} // namespace binio

} // namespace dtdr
