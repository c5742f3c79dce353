#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hrc {

using Json = nlohmann::json;

namespace text {

std::string trim(std::string_view s);
std::string lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Lowercase alphanumeric word tokens; apostrophes and punctuation split words.
std::vector<std::string> words(std::string_view s);

/// Counts sentences terminated by '.', '!' or '?' (a trailing fragment counts).
int sentence_count(std::string_view s);

}  // namespace text

/// Hex-encoded SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// 64-bit FNV-1a, stable across processes and platforms.
std::uint64_t fnv1a64(std::string_view data);

/// splitmix64 finalizer; used to derive independent seeds from (seed, salt).
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt);

namespace fsio {

std::string read_file(const std::filesystem::path& p);
/// Write-to-temp then rename so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& p, std::string_view contents);
Json read_json(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const Json& j);

}  // namespace fsio

}  // namespace hrc
