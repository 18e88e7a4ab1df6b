#pragma once

#include <compare>
#include <filesystem>
#include <string>
#include <vector>

namespace paraforge {

// One of the five readability tiers, 1 (easiest) to 5 (academic).
class ComplexityLevel {
 public:
  explicit ComplexityLevel(int value);

  int value() const { return value_; }
  auto operator<=>(const ComplexityLevel&) const = default;

  static constexpr int kMin = 1;
  static constexpr int kMax = 5;
  static std::vector<ComplexityLevel> all();

 private:
  int value_;
};

// Target-group definition of one level; the default catalog ships as a
// JSON file under data/.
struct ComplexityLevelSpec {
  ComplexityLevel level{1};
  std::string name;
  std::string target_group;
  std::string characteristics;
  std::string example_areas;
};

using LevelCatalog = std::vector<ComplexityLevelSpec>;

// Loads and validates a catalog file: exactly five specs, levels 1..5
// each present once.
LevelCatalog load_level_catalog(const std::filesystem::path& path);
void validate_level_catalog(const LevelCatalog& catalog);

}  // namespace paraforge
