#include "paraforge/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "internal/batch.hpp"
#include "internal/json_extract.hpp"
#include "paraforge/errors.hpp"
#include "paraforge/hashing.hpp"
#include "paraforge/text.hpp"

namespace paraforge {

OneShotExample load_one_shot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open one-shot example: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("one-shot example " + path.string() + ": " + e.what());
  }
  OneShotExample ex;
  try {
    ex.input = doc.at("input").get<std::string>();
    for (int level = 1; level <= 5; ++level) {
      ex.outputs.emplace(ComplexityLevel(level),
                         doc.at("outputs").at(std::to_string(level)).get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("one-shot example " + path.string() + ": " + e.what());
  }
  return ex;
}

PromptSpec default_prompt_spec(LevelCatalog catalog, OneShotExample one_shot) {
  PromptSpec spec;
  spec.system_text = "You are an expert in adapting texts to different complexity levels.";
  spec.level_catalog = std::move(catalog);
  spec.one_shot = std::move(one_shot);
  spec.task_text =
      "Paraphrase the given text to five different complexity levels. When creating the "
      "paraphrases, proceed step by step, considering the target group and the specific "
      "characteristics and areas of application of each complexity level. Do this task in the "
      "form of an inner monologue. Do not explain your thought process, but present the final "
      "paraphrased texts directly.";
  spec.response_schema_text =
      "{\n"
      "    \"1\": \"Level 1 text\",\n"
      "    \"2\": \"Level 2 text\",\n"
      "    \"3\": \"Level 3 text\",\n"
      "    \"4\": \"Level 4 text\",\n"
      "    \"5\": \"Level 5 text\"\n"
      "}";
  return spec;
}

std::string build_prompt(const PromptSpec& spec, const std::string& input_text) {
  validate_level_catalog(spec.level_catalog);
  if (input_text.empty()) throw ValidationError("build_prompt: empty input text");

  LevelCatalog catalog = spec.level_catalog;
  std::sort(catalog.begin(), catalog.end(),
            [](const auto& a, const auto& b) { return a.level < b.level; });

  std::ostringstream os;
  os << "**Context**\n";
  os << "There are five complexity levels:\n\n";
  for (const auto& level : catalog) {
    os << "Level " << level.level.value() << " - " << level.name << "\n";
    os << "Target group: " << level.target_group << "\n";
    os << "Characteristics: " << level.characteristics << "\n";
    os << "Example areas: " << level.example_areas << "\n\n";
  }

  os << "**Example**\n";
  os << "Text: " << spec.one_shot.input << "\n";
  os << "Paraphrases in JSON format:\n";
  nlohmann::ordered_json example;
  for (const auto& [level, text] : spec.one_shot.outputs) {
    example[std::to_string(level.value())] = text;
  }
  os << example.dump(4) << "\n\n";

  os << "**Task**\n";
  os << spec.task_text << "\n\n";

  os << "Text: " << input_text << "\n\n";

  os << "**Response in JSON format**\n";
  os << spec.response_schema_text << "\n";
  return os.str();
}

std::string to_string(SynthesisParseReason reason) {
  switch (reason) {
    case SynthesisParseReason::not_json: return "not_json";
    case SynthesisParseReason::missing_level: return "missing_level";
    case SynthesisParseReason::empty_level: return "empty_level";
    case SynthesisParseReason::extra_keys: return "extra_keys";
    case SynthesisParseReason::multiple_objects: return "multiple_objects";
  }
  return "?";
}

ParaphraseParseResult parse_paraphrase_response(const std::string& raw_text) {
  ParaphraseParseResult result;
  auto fail = [&](SynthesisParseReason reason, std::string message) {
    result.failure = SynthesisParseFailure{reason, std::move(message)};
    return result;
  };

  auto objects = detail::extract_json_objects(raw_text);
  if (objects.empty()) return fail(SynthesisParseReason::not_json, "no JSON object found");
  if (objects.size() > 1) {
    return fail(SynthesisParseReason::multiple_objects,
                "found " + std::to_string(objects.size()) + " JSON objects");
  }
  auto doc = nlohmann::json::parse(objects.front());
  if (!doc.is_object()) return fail(SynthesisParseReason::not_json, "top-level value is not an object");

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key.size() != 1 || key[0] < '1' || key[0] > '5') {
      return fail(SynthesisParseReason::extra_keys, "unexpected key '" + key + "'");
    }
  }
  for (int level = 1; level <= 5; ++level) {
    std::string key = std::to_string(level);
    if (!doc.contains(key)) {
      return fail(SynthesisParseReason::missing_level, "missing level key '" + key + "'");
    }
    if (!doc[key].is_string()) {
      return fail(SynthesisParseReason::not_json, "value under '" + key + "' is not a string");
    }
    std::string value = doc[key].get<std::string>();
    if (text::normalize_whitespace(value).empty()) {
      return fail(SynthesisParseReason::empty_level, "empty paraphrase under '" + key + "'");
    }
    result.levels.emplace(ComplexityLevel(level), std::move(value));
  }
  return result;
}

std::string generation_cache_key(const std::string& sample_id, const std::string& system_text,
                                 const std::string& user_text, const BackendParams& params,
                                 int attempt) {
  nlohmann::ordered_json key;
  key["sample_id"] = sample_id;
  key["system_text"] = system_text;
  key["user_text"] = user_text;
  key["model_name"] = params.model_name;
  key["temperature"] = params.temperature;
  key["max_tokens"] = params.max_tokens;
  key["attempt"] = attempt;
  return sha256_hex(key.dump());
}

namespace detail_batch {

std::string generate_with_cache(GenerationBackend& backend, GenerationCache& cache,
                                const std::string& cache_key, const std::string& system_text,
                                const std::string& user_text, const BackendParams& params,
                                const BatchOptions& options, std::atomic<int>& backend_calls) {
  if (auto hit = cache.get(cache_key)) return *hit;
  for (int attempt = 0;; ++attempt) {
    try {
      backend_calls.fetch_add(1);
      std::string raw = backend.generate(system_text, user_text, params);
      cache.put(cache_key, raw);
      return raw;
    } catch (const BackendError&) {
      if (attempt >= options.retries) throw;
      if (options.backoff_base_ms > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(options.backoff_base_ms << attempt));
      }
    }
  }
}

void run_pool(int parallelism, std::size_t task_count, const std::function<void(std::size_t)>& work) {
  if (parallelism < 1) throw ValidationError("parallelism must be >= 1");
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= task_count) return;
      work(i);
    }
  };
  if (parallelism == 1) {
    worker();
    return;
  }
  std::vector<std::thread> threads;
  std::size_t n = std::min(static_cast<std::size_t>(parallelism), task_count ? task_count : std::size_t{1});
  threads.reserve(n);
  for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

}  // namespace detail_batch

SynthesisBatchResult synthesize_batch(const std::vector<Sample>& samples, const PromptSpec& spec,
                                      GenerationBackend& backend, GenerationCache& cache,
                                      const BackendParams& params, const BatchOptions& options) {
  validate_level_catalog(spec.level_catalog);

  struct Slot {
    std::optional<Sample> success;
    std::optional<SynthesisFailure> failure;
  };
  std::vector<Slot> slots(samples.size());
  std::atomic<int> backend_calls{0};

  detail_batch::run_pool(options.parallelism, samples.size(), [&](std::size_t i) {
    const Sample& input = samples[i];
    std::string prompt = build_prompt(spec, input.original);
    std::string key = generation_cache_key(input.id, spec.system_text, prompt, params);
    std::string raw;
    try {
      raw = detail_batch::generate_with_cache(backend, cache, key, spec.system_text, prompt, params,
                                              options, backend_calls);
    } catch (const BackendError& e) {
      slots[i].failure = SynthesisFailure{input.id, "backend", e.what()};
      return;
    }
    auto parsed = parse_paraphrase_response(raw);
    if (!parsed.ok()) {
      slots[i].failure = SynthesisFailure{input.id, "parse:" + to_string(parsed.failure->reason),
                                          parsed.failure->message};
      return;
    }
    Sample out = input;
    out.paraphrases = std::move(parsed.levels);
    slots[i].success = std::move(out);
  });

  SynthesisBatchResult result;
  for (auto& slot : slots) {
    if (slot.success) result.successes.push_back(std::move(*slot.success));
    if (slot.failure) result.failures.push_back(std::move(*slot.failure));
  }
  result.backend_calls = backend_calls.load();
  return result;
}

}  // namespace paraforge
