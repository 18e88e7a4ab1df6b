#include "paraforge/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "paraforge/errors.hpp"
#include "paraforge/hashing.hpp"

namespace paraforge {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }

  PipelineConfig config;
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    if (doc.contains("backend")) {
      const auto& b = doc["backend"];
      if (b.contains("kind")) config.backend.kind = b["kind"].get<std::string>();
      if (b.contains("url")) config.backend.url = b["url"].get<std::string>();
      if (b.contains("model_name")) config.backend.model_name = b["model_name"].get<std::string>();
      if (b.contains("temperature")) config.backend.temperature = b["temperature"].get<double>();
      if (b.contains("max_tokens")) config.backend.max_tokens = b["max_tokens"].get<int>();
      if (b.contains("parallelism")) config.backend.parallelism = b["parallelism"].get<int>();
      if (b.contains("retries")) config.backend.retries = b["retries"].get<int>();
    }
    if (doc.contains("paths")) {
      const auto& p = doc["paths"];
      if (p.contains("cache_dir")) config.paths.cache_dir = resolve(base, p["cache_dir"].get<std::string>());
      if (p.contains("vocab")) config.paths.vocab = resolve(base, p["vocab"].get<std::string>());
      if (p.contains("profiles")) config.paths.profiles = resolve(base, p["profiles"].get<std::string>());
      if (p.contains("level_catalog")) {
        config.paths.level_catalog = resolve(base, p["level_catalog"].get<std::string>());
      }
      if (p.contains("one_shot")) config.paths.one_shot = resolve(base, p["one_shot"].get<std::string>());
    }
    if (doc.contains("seeds") && doc["seeds"].contains("sampling")) {
      config.seeds.sampling = doc["seeds"]["sampling"].get<std::uint64_t>();
    }
    if (doc.contains("filter_thresholds")) {
      const auto& f = doc["filter_thresholds"];
      if (f.contains("oov_min_run")) config.filter_thresholds.oov_min_run = f["oov_min_run"].get<int>();
      if (f.contains("langid_min_conf")) {
        config.filter_thresholds.langid_min_conf = f["langid_min_conf"].get<double>();
      }
    }
    if (doc.contains("judge") && doc["judge"].contains("prompt_language")) {
      config.judge.prompt_language = doc["judge"]["prompt_language"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }

  if (config.backend.parallelism < 1) {
    throw ValidationError("config: backend.parallelism must be >= 1");
  }
  if (config.backend.kind != "mock" && config.backend.kind != "http") {
    throw ValidationError("config: backend.kind must be 'mock' or 'http'");
  }
  if (config.backend.kind == "http" && config.backend.url.empty()) {
    throw ValidationError("config: backend.url required for the http backend");
  }
  if (!config.paths.cache_dir.empty()) std::filesystem::create_directories(config.paths.cache_dir);
  for (const auto* entry : {&config.paths.vocab, &config.paths.profiles,
                            &config.paths.level_catalog, &config.paths.one_shot}) {
    if (!entry->empty() && !std::filesystem::exists(*entry)) {
      throw ValidationError("config: path does not exist: " + entry->string());
    }
  }
  return config;
}

std::string config_hash(const PipelineConfig& config) {
  nlohmann::ordered_json doc;
  doc["backend"] = {{"kind", config.backend.kind},
                    {"url", config.backend.url},
                    {"model_name", config.backend.model_name},
                    {"temperature", config.backend.temperature},
                    {"max_tokens", config.backend.max_tokens},
                    {"parallelism", config.backend.parallelism},
                    {"retries", config.backend.retries}};
  doc["paths"] = {{"cache_dir", config.paths.cache_dir.string()},
                  {"vocab", config.paths.vocab.string()},
                  {"profiles", config.paths.profiles.string()},
                  {"level_catalog", config.paths.level_catalog.string()},
                  {"one_shot", config.paths.one_shot.string()}};
  doc["seeds"] = {{"sampling", config.seeds.sampling}};
  doc["filter_thresholds"] = {{"oov_min_run", config.filter_thresholds.oov_min_run},
                              {"langid_min_conf", config.filter_thresholds.langid_min_conf}};
  doc["judge"] = {{"prompt_language", config.judge.prompt_language}};
  return sha256_hex(doc.dump());
}

}  // namespace paraforge
