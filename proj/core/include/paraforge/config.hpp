#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace paraforge {

struct BackendConfig {
  std::string kind = "mock";  // mock | http
  std::string url;
  std::string model_name = "mock";
  double temperature = 0.0;
  int max_tokens = 1024;
  int parallelism = 4;
  int retries = 2;
};

struct PathsConfig {
  std::filesystem::path cache_dir;
  std::filesystem::path vocab;
  std::filesystem::path profiles;
  std::filesystem::path level_catalog;
  std::filesystem::path one_shot;
};

struct SeedsConfig {
  std::uint64_t sampling = 0;
};

struct FilterThresholds {
  int oov_min_run = 3;
  double langid_min_conf = 0.5;
};

struct JudgeConfig {
  std::string prompt_language = "de";
};

struct PipelineConfig {
  BackendConfig backend;
  PathsConfig paths;
  SeedsConfig seeds;
  FilterThresholds filter_thresholds;
  JudgeConfig judge;
};

// Loads and validates: every referenced path must exist (the cache dir
// is created), parallelism >= 1. Paths are resolved relative to the
// config file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Hash of the effective configuration (after flag overrides) for the run
// manifest.
std::string config_hash(const PipelineConfig& config);

}  // namespace paraforge
