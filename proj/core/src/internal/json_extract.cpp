#include "internal/json_extract.hpp"

#include <nlohmann/json.hpp>

namespace paraforge::detail {

std::vector<std::string> extract_json_objects(std::string_view text) {
  std::vector<std::string> objects;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      ++i;
      continue;
    }
    std::size_t start = i;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t j = start; j < text.size(); ++j) {
      char c = text[j];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          end = j;
          break;
        }
      }
    }
    if (end == std::string_view::npos) break;  // unbalanced: nothing further can close
    std::string span(text.substr(start, end - start + 1));
    if (nlohmann::json::accept(span)) objects.push_back(std::move(span));
    i = end + 1;
  }
  return objects;
}

}  // namespace paraforge::detail
