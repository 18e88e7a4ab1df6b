#include "paraforge/backend.hpp"

#include <nlohmann/json.hpp>

#include "paraforge/text.hpp"

namespace paraforge {

namespace {

bool contains_any(const std::string& haystack, const std::set<std::string>& needles) {
  for (const auto& n : needles) {
    if (!n.empty() && haystack.find(n) != std::string::npos) return true;
  }
  return false;
}

// FNV-1a, only used to pick deterministic mock answer variants.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// The synthesis prompt carries the input as the last "Text: " line before
// the response-format section.
std::string extract_input_text(const std::string& user_text) {
  std::size_t resp = user_text.rfind("**Response");
  std::string head = resp == std::string::npos ? user_text : user_text.substr(0, resp);
  std::size_t pos = head.rfind("Text: ");
  if (pos == std::string::npos) return head;
  std::string tail = head.substr(pos + 6);
  // trim trailing blank section separator
  while (!tail.empty() && (tail.back() == '\n' || tail.back() == ' ')) tail.pop_back();
  return tail;
}

std::string extract_field(const std::string& user_text, const std::string& label) {
  std::size_t pos = user_text.find(label);
  if (pos == std::string::npos) return {};
  std::size_t start = pos + label.size();
  std::size_t end = user_text.find('\n', start);
  if (end == std::string::npos) end = user_text.size();
  return user_text.substr(start, end - start);
}

}  // namespace

std::string MockSynthesisBackend::paraphrase_for(int level, const std::string& input_text) {
  static const char* kPrefixes[6] = {
      "",
      "Ganz einfach gesagt:",
      "Einfach gesagt:",
      "Kurz gesagt:",
      "Genauer betrachtet:",
      "In wissenschaftlicher Hinsicht:",
  };
  return std::string(kPrefixes[level]) + " " + input_text;
}

std::string MockSynthesisBackend::generate(const std::string&, const std::string& user_text,
                                           const BackendParams&) {
  calls_.fetch_add(1);
  if (contains_any(user_text, behavior_.transport_fail_markers)) {
    throw BackendError("mock transport failure");
  }
  if (contains_any(user_text, behavior_.flaky_markers)) {
    std::lock_guard<std::mutex> lock(flaky_mutex_);
    for (const auto& marker : behavior_.flaky_markers) {
      if (user_text.find(marker) != std::string::npos && !failed_once_.count(marker)) {
        failed_once_.insert(marker);
        throw BackendError("mock transient failure");
      }
    }
  }
  if (contains_any(user_text, behavior_.invalid_json_markers)) {
    return "Entschuldigung, das kann ich nicht in dem gewünschten Format liefern.";
  }
  std::string input = extract_input_text(user_text);
  nlohmann::ordered_json out;
  for (int level = 1; level <= 5; ++level) {
    out[std::to_string(level)] = paraphrase_for(level, input);
  }
  return out.dump();
}

std::string MockJudgeBackend::generate(const std::string&, const std::string& user_text,
                                       const BackendParams&) {
  calls_.fetch_add(1);
  if (contains_any(user_text, behavior_.transport_fail_markers)) {
    throw BackendError("mock transport failure");
  }
  if (contains_any(user_text, behavior_.invalid_json_markers)) {
    return "Ich bin mir nicht sicher, wie ich das bewerten soll.";
  }

  nlohmann::ordered_json out;
  if (contains_any(user_text, nan_inconsistent_markers)) {
    out["content_preservation"] = "correctly";
    out["information_loss"] = "never";
    out["information_addition"] = "never";
    out["type_of_addition"] = nlohmann::json::array({"embellishment"});  // violates the NaN rule
    out["complexity_level"] = "appropriate";
    return out.dump();
  }

  std::uint64_t h = fnv1a(user_text);
  static const char* kLoss[3] = {"never", "seldom", "sometimes"};
  static const char* kComplexity[3] = {"appropriate", "a_bit_too_easy", "a_bit_too_complicated"};
  out["content_preservation"] = "correctly";
  out["information_loss"] = kLoss[h % 3];
  out["information_addition"] = "never";
  out["type_of_addition"] = nlohmann::json::array({"NaN"});
  out["complexity_level"] = kComplexity[(h / 3) % 3];
  return out.dump();
}

}  // namespace paraforge
