#ifndef CALNET_UTIL_HPP
#define CALNET_UTIL_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace calnet {

/// Fatal input problem (bad header, duplicate key, unreadable file, ...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Fatal filesystem problem.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

namespace util {

// Splits one CSV line on commas. No quoting support; the file schemas do not
// require it. Returns false if the field count differs from `expected`.
bool split_fields(std::string_view line, std::vector<std::string_view>& out, std::size_t expected);

std::optional<long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// FNV-1a 64-bit over a byte range.
std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a 64-bit over a whole file. Throws IoError if unreadable.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Writes `content` to `path` via a temp file in the same directory plus
/// rename, so readers never observe a partially written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace util
}  // namespace calnet

#endif  // CALNET_UTIL_HPP
