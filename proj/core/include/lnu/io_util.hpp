#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace lnu {

/// Writes `content` to a sibling temp file and renames it over `path`.
/// Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// printf("%.6g"); infinities print as "inf" / "-inf".
std::string format_float(double value);

}  // namespace lnu
