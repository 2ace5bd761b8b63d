#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sketch::util {

/// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Replaces the file's contents; throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sketch::util
