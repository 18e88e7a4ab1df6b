#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace paraforge {

// Hex-encoded SHA-256. Used for generation-cache keys and manifest
// provenance hashes.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace paraforge
