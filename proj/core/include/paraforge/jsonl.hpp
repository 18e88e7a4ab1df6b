#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace paraforge::jsonl {

struct Line {
  std::size_t number = 0;  // 1-based
  std::string text;
};

// Reads a JSONL file into raw lines (blank lines skipped). Parsing is left
// to callers so that schema errors can name the line number.
std::vector<Line> read_lines(const std::filesystem::path& path);

// Writes one record per line, LF endings, UTF-8, atomically
// (temp file + rename).
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

}  // namespace paraforge::jsonl
