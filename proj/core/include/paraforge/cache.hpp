#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace paraforge {

// Content-addressed raw-generation store: one file per request hash.
// Concurrent writers are safe for distinct keys (temp file + rename); the
// same key is only ever written with identical content.
class GenerationCache {
 public:
  explicit GenerationCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& raw_text);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace paraforge
