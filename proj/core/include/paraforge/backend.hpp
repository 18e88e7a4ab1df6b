#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "paraforge/errors.hpp"

namespace paraforge {

struct BackendParams {
  std::string model_name = "mock";
  double temperature = 0.0;
  int max_tokens = 1024;
};

// The one operation every generation backend implements. Transport
// problems surface as BackendError; the content of raw_text is not
// interpreted here.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string generate(const std::string& system_text, const std::string& user_text,
                               const BackendParams& params) = 0;
  virtual std::string name() const = 0;
};

// Failure injection for the offline mocks, keyed on substrings of the
// user prompt (the backend contract has no other identity to key on).
struct MockBehavior {
  std::set<std::string> invalid_json_markers;    // emit non-JSON prose instead
  std::set<std::string> transport_fail_markers;  // throw BackendError on every call
  std::set<std::string> flaky_markers;           // throw once, then succeed
};

// Emits a valid five-level paraphrase JSON derived deterministically from
// the input text embedded in the prompt.
class MockSynthesisBackend : public GenerationBackend {
 public:
  MockSynthesisBackend() = default;
  explicit MockSynthesisBackend(MockBehavior behavior) : behavior_(std::move(behavior)) {}

  std::string generate(const std::string& system_text, const std::string& user_text,
                       const BackendParams& params) override;
  std::string name() const override { return "mock-synthesis"; }

  int call_count() const { return calls_.load(); }

  // Deterministic level paraphrase used by the mock; exposed so fixtures
  // can predict outputs.
  static std::string paraphrase_for(int level, const std::string& input_text);

 private:
  MockBehavior behavior_;
  std::atomic<int> calls_{0};
  std::set<std::string> failed_once_;
  std::mutex flaky_mutex_;
};

// Emits schema-conforming verdicts; criteria vary deterministically with
// the prompt hash but never trigger a removal rule, so mock pipelines
// keep their samples. Markers can force a nan-inconsistent verdict or
// invalid JSON.
class MockJudgeBackend : public GenerationBackend {
 public:
  MockJudgeBackend() = default;
  explicit MockJudgeBackend(MockBehavior behavior) : behavior_(std::move(behavior)) {}

  std::string generate(const std::string& system_text, const std::string& user_text,
                       const BackendParams& params) override;
  std::string name() const override { return "mock-judge"; }

  int call_count() const { return calls_.load(); }

  std::set<std::string> nan_inconsistent_markers;

 private:
  MockBehavior behavior_;
  std::atomic<int> calls_{0};
};

// Chat-completion-style HTTP backend: POST {model, messages, temperature,
// max_tokens} to the configured URL, API key from PARAFORGE_API_KEY.
class HttpChatBackend : public GenerationBackend {
 public:
  explicit HttpChatBackend(std::string url, std::string api_key_env = "PARAFORGE_API_KEY");

  std::string generate(const std::string& system_text, const std::string& user_text,
                       const BackendParams& params) override;
  std::string name() const override { return "http"; }

 private:
  std::string url_;
  std::string api_key_;
};

}  // namespace paraforge
