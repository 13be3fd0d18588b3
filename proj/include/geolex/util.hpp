#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geolex {

// Exit-code contract: 0 success, 1 usage/config error, 2 data error.
// ConfigError maps to 1, DataError to 2; the CLI does the mapping.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Seeded 64-bit hash with good avalanche; used for deterministic subsampling
// and RNG stream derivation. Not cryptographic.
uint64_t stable_hash64(uint64_t seed, std::string_view s);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace geolex
