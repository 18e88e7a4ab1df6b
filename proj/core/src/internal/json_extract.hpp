#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace paraforge::detail {

// Balanced top-level {...} spans that parse as JSON objects, in order of
// appearance. The scan is string-aware so braces inside string values do
// not confuse it, and surrounding prose or code fences are ignored.
std::vector<std::string> extract_json_objects(std::string_view text);

}  // namespace paraforge::detail
