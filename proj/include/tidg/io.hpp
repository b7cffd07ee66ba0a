#pragma once

#include <filesystem>
#include <string>

namespace tidg {

/// "%.17g" formatting, which round-trips every finite double.
std::string format_double(double value);

/// Writes to a temporary sibling file and renames it over `path`, creating
/// parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace tidg
