#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paraforge/backend.hpp"
#include "paraforge/cache.hpp"
#include "paraforge/complexity.hpp"
#include "paraforge/corpus.hpp"

namespace paraforge {

struct OneShotExample {
  std::string input;
  std::map<ComplexityLevel, std::string> outputs;  // all five levels
};

// {"input": "...", "outputs": {"1": "...", ..., "5": "..."}}
OneShotExample load_one_shot(const std::filesystem::path& path);

// The five prompt sections, rendered in this order: level definitions,
// one-shot example, task description, input text, response format.
struct PromptSpec {
  std::string system_text;
  LevelCatalog level_catalog;
  OneShotExample one_shot;
  std::string task_text;
  std::string response_schema_text;
};

PromptSpec default_prompt_spec(LevelCatalog catalog, OneShotExample one_shot);

// Deterministic rendering; throws on an invalid catalog or empty input.
std::string build_prompt(const PromptSpec& spec, const std::string& input_text);

enum class SynthesisParseReason { not_json, missing_level, empty_level, extra_keys, multiple_objects };

struct SynthesisParseFailure {
  SynthesisParseReason reason;
  std::string message;
};

std::string to_string(SynthesisParseReason reason);

struct ParaphraseParseResult {
  std::map<ComplexityLevel, std::string> levels;
  std::optional<SynthesisParseFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

// Total: never throws. Succeeds iff the raw text contains exactly one
// JSON object with non-empty string values under keys "1".."5";
// surrounding prose and code fences are ignored.
ParaphraseParseResult parse_paraphrase_response(const std::string& raw_text);

struct BatchOptions {
  int parallelism = 1;
  int retries = 2;              // transport retries; parse failures are not retried
  long backoff_base_ms = 500;   // exponential: base * 2^attempt
};

struct SynthesisFailure {
  std::string sample_id;
  std::string kind;  // "parse:<reason>" or "backend"
  std::string message;
};

struct SynthesisBatchResult {
  std::vector<Sample> successes;  // input order, paraphrases filled in
  std::vector<SynthesisFailure> failures;
  int backend_calls = 0;  // calls issued by this run (0 on a full cache hit)
};

// Runs the batch with bounded concurrency. Results are cached by request
// hash, so a rerun with an intact cache issues zero backend requests; a
// single failing sample never aborts the batch.
SynthesisBatchResult synthesize_batch(const std::vector<Sample>& samples, const PromptSpec& spec,
                                      GenerationBackend& backend, GenerationCache& cache,
                                      const BackendParams& params, const BatchOptions& options);

// Cache key for one request: hash over sample id, prompt, system text,
// backend params and the attempt ordinal.
std::string generation_cache_key(const std::string& sample_id, const std::string& system_text,
                                 const std::string& user_text, const BackendParams& params,
                                 int attempt = 0);

}  // namespace paraforge
