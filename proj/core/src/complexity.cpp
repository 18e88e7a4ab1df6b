#include "paraforge/complexity.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "paraforge/errors.hpp"

namespace paraforge {

ComplexityLevel::ComplexityLevel(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw ValidationError("complexity level out of range [1,5]: " + std::to_string(value));
  }
}

std::vector<ComplexityLevel> ComplexityLevel::all() {
  std::vector<ComplexityLevel> v;
  for (int i = kMin; i <= kMax; ++i) v.push_back(ComplexityLevel(i));
  return v;
}

LevelCatalog load_level_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open level catalog: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("level catalog " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw ValidationError("level catalog must be a JSON array");
  LevelCatalog catalog;
  for (const auto& item : doc) {
    ComplexityLevelSpec spec;
    try {
      spec.level = ComplexityLevel(item.at("level").get<int>());
      spec.name = item.at("name").get<std::string>();
      spec.target_group = item.at("target_group").get<std::string>();
      spec.characteristics = item.at("characteristics").get<std::string>();
      spec.example_areas = item.at("example_areas").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("level catalog " + path.string() + ": " + e.what());
    }
    catalog.push_back(std::move(spec));
  }
  validate_level_catalog(catalog);
  return catalog;
}

void validate_level_catalog(const LevelCatalog& catalog) {
  if (catalog.size() != 5) {
    throw ValidationError("level catalog must define exactly 5 levels, got " +
                          std::to_string(catalog.size()));
  }
  bool seen[6] = {};
  for (const auto& spec : catalog) {
    int v = spec.level.value();
    if (seen[v]) throw ValidationError("duplicate level in catalog: " + std::to_string(v));
    seen[v] = true;
    if (spec.name.empty()) throw ValidationError("empty level name for level " + std::to_string(v));
  }
}

}  // namespace paraforge
