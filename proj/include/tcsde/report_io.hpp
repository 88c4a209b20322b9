#pragma once

#include <string>

namespace tcsde {

// Shortest decimal representation that parses back to the same double.
// Keeps report files byte-stable across runs and platforms with the same
// floating-point behavior.
std::string format_double(double v);

// ISO 8601 UTC wall-clock stamp, e.g. "2024-05-01T12:00:00Z".
std::string utc_timestamp();

// Creates missing parent directories and writes content atomically enough
// for our purposes (single write).  Throws std::runtime_error naming the
// path on any failure.
void write_text_file(const std::string& path, const std::string& content);

// Reads a whole file; throws std::runtime_error naming the path.
std::string read_text_file(const std::string& path);

}  // namespace tcsde
