#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "paraforge/complexity.hpp"
#include "paraforge/corpus.hpp"

namespace paraforge {

struct Vocabulary {
  std::unordered_set<std::string> entries;  // lowercased word forms
  std::string source_name;
};

// UTF-8, one token per line, '#' comments allowed. Throws on empty lists.
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct OovRun {
  std::size_t start_token_index = 0;
  std::size_t length = 0;
  std::vector<std::string> tokens;  // stripped, lowercased lookup forms
};

// Maximal runs of >= min_run consecutive out-of-vocabulary tokens.
// Tokens are lowercased and stripped of leading/trailing punctuation
// before lookup; pure-punctuation and pure-digit tokens never count as
// OOV. Pure function.
std::vector<OovRun> find_oov_runs(const std::string& input, const Vocabulary& vocab, int min_run = 3);

// Rank profile of mixed character 1..3-grams, most frequent first.
struct LanguageProfile {
  std::string code;
  std::vector<std::string> ngrams_by_rank;
  std::map<std::string, std::size_t> rank;  // derived lookup
};

LanguageProfile build_language_profile(const std::string& code, const std::string& training_text,
                                       std::size_t profile_size = 400);
void save_language_profile(const LanguageProfile& profile, const std::filesystem::path& path);
LanguageProfile load_language_profile(const std::filesystem::path& path);
// Loads every *.json profile in a directory, sorted by code.
std::vector<LanguageProfile> load_language_profiles(const std::filesystem::path& dir);

// Out-of-place rank distance over the shared 1..3-gram profile. Returns
// the best-matching code with a normalized distance-based confidence in
// [0,1]; texts under 20 characters return ("und", 0.0). Profiles must
// include at least de, en and fr. Pure function.
std::pair<std::string, double> detect_language(const std::string& input,
                                               const std::vector<LanguageProfile>& profiles);

enum class FilterRule { invalid_json, oov_run, foreign_language, fre_nonmonotone_warning };
enum class Disposition { pending, keep, remove };

std::string to_string(FilterRule rule);
std::string to_string(Disposition d);

struct FilterFlag {
  std::string sample_id;
  std::optional<ComplexityLevel> level;
  FilterRule rule = FilterRule::invalid_json;
  std::string detail;
  Disposition disposition = Disposition::pending;

  // The FRE ordering check is advisory; it never pulls a sample out of
  // the clean split.
  bool blocking() const { return rule != FilterRule::fre_nonmonotone_warning; }
};

struct PrefilterOptions {
  int oov_min_run = 3;
  double langid_min_conf = 0.5;
};

// A sample id that never made it into the split because its generation
// failed to parse; surfaces as an invalid_json flag.
struct PriorFailure {
  std::string sample_id;
  std::string detail;
};

struct PrefilterResult {
  DatasetSplit clean;
  std::vector<FilterFlag> flags;
};

// Runs the OOV, language and FRE-ordering checks per (sample, level).
// Samples without blocking flags go to `clean`; flagged ones wait in the
// review queue. |clean| + |blocking-flagged ids| == |split|.
PrefilterResult apply_prefilters(const DatasetSplit& split, const Vocabulary& vocab,
                                 const std::vector<LanguageProfile>& profiles,
                                 const PrefilterOptions& options = {},
                                 const std::vector<PriorFailure>& synthesis_failures = {});

void save_flags(const std::vector<FilterFlag>& flags, const std::filesystem::path& path);
std::vector<FilterFlag> load_flags(const std::filesystem::path& path);

struct ReviewDecision {
  std::size_t flag_index = 0;
  Disposition decision = Disposition::keep;  // keep or remove
};

// CSV lines "index,keep|remove"; '#' comments allowed.
std::vector<ReviewDecision> load_decisions(const std::filesystem::path& path);

// Applies decisions in order. Throws on an unknown index or on a replay
// against an already-resolved flag; untouched flags stay pending.
void resolve_review(std::vector<FilterFlag>& flags, const std::vector<ReviewDecision>& decisions);

// Final split after review: the prefilter-clean samples plus every
// flagged sample whose blocking flags were all resolved keep, in the
// original order.
DatasetSplit apply_review(const DatasetSplit& original, const std::vector<FilterFlag>& flags);

}  // namespace paraforge
