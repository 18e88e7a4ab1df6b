#include "paraforge/cache.hpp"

#include <atomic>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "paraforge/errors.hpp"

namespace paraforge {

GenerationCache::GenerationCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> GenerationCache::get(const std::string& key) const {
  auto path = dir_ / (key + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto doc = nlohmann::json::parse(buf.str());
    return doc.at("raw_text").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // corrupt entry: treat as miss, it will be rewritten
  }
}

void GenerationCache::put(const std::string& key, const std::string& raw_text) {
  static std::atomic<unsigned> counter{0};
  auto path = dir_ / (key + ".json");
  auto tmp = dir_ / (key + ".tmp." + std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache entry: " + path.string());
    nlohmann::json doc;
    doc["raw_text"] = raw_text;
    out << doc.dump();
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace paraforge
