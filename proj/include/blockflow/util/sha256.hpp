#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace blockflow::util {

/// SHA-256 digest as a lowercase hex string.
std::string sha256Hex(std::span<const std::byte> data);
std::string sha256Hex(std::string_view data);

/// Digest of a whole file, or nullopt if the file cannot be read.
std::optional<std::string> sha256File(const std::filesystem::path& path);

}  // namespace blockflow::util
