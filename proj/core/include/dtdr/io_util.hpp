#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

namespace dtdr {

/// Writes through a sibling temp file and renames it into place, so readers never observe a
/// partially written file.
class atomic_file {
public:
    explicit atomic_file(std::filesystem::path target, bool binary = false);
    ~atomic_file();
    atomic_file(const atomic_file&) = delete;
    atomic_file& operator=(const atomic_file&) = delete;

    std::ofstream& stream() { return out_; }
    /// Flushes and renames. Without commit() the temp file is removed on destruction.
    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

namespace binio {

template <typename T>
void put(std::ostream& out, const T& v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void expect_magic(std::istream& in, std::string_view magic, const std::filesystem::path& path);
void check_stream(const std::istream& in, const std::filesystem::path& path);

} // namespace binio

} // namespace dtdr
