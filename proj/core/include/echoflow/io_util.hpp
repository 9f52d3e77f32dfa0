#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace echoflow::io {

/// Minimal RFC-4180-ish CSV. Fields containing comma, quote or newline
/// are quoted on write; quoted fields are unescaped on read. No
/// multi-line fields.
std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv_line(const std::vector<std::string>& fields);

std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64-bit. Used for input digests in run manifests; not a
/// cryptographic hash.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::string& path);

std::string to_hex64(std::uint64_t v);

/// Shortest-round-trip-ish fixed formatting so emitted files are
/// byte-stable across runs and platforms with the same libc.
std::string format_double(double v);

}  // namespace echoflow::io
