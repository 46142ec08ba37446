#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace atomwalk {

/// 17 significant digits ("%.17g"), enough to round-trip any double.
std::string format_double(double v);

/// Writes `content` to `path`, throwing Error("io-error") on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace atomwalk
