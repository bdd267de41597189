#pragma once

#include <string>

namespace kts {

/// Write a file atomically: the content goes to a sibling temp file which is
/// then renamed over the target, so readers never observe a partial file.
/// Throws IoError on failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Read a whole file; throws MissingFile when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace kts
