#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "paraforge/analysis.hpp"
#include "paraforge/backend.hpp"
#include "paraforge/cache.hpp"
#include "paraforge/complexity.hpp"
#include "paraforge/corpus.hpp"
#include "paraforge/synthesis.hpp"

namespace paraforge {

// Five-criterion structured evaluation of one (original, paraphrase,
// level) pair. type_of_addition == {nan_marker} exactly when
// information_addition == never.
struct JudgeVerdict {
  std::string sample_id;
  ComplexityLevel level{1};
  Q1Content content_preservation = Q1Content::correctly;
  Frequency information_loss = Frequency::never;
  Frequency information_addition = Frequency::never;
  std::set<AdditionType> type_of_addition{AdditionType::nan_marker};
  Q5Complexity complexity_level = Q5Complexity::appropriate;

  bool operator==(const JudgeVerdict&) const = default;
};

struct JudgePromptOptions {
  std::string language = "de";  // "de" or "en"
};

struct JudgePrompt {
  std::string system_text;
  std::string user_text;
};

// System text: level definitions, the five criteria, the IMPORTANT
// guidance block and the JSON schema. User text: original, paraphrase,
// target level and the closing emphasis line. Pairs are judged
// individually, without the other levels as context.
JudgePrompt build_judge_prompt(const std::string& original, const std::string& paraphrase,
                               ComplexityLevel level, const LevelCatalog& catalog,
                               const JudgePromptOptions& options = {});

enum class VerdictParseReason { not_json, bad_enum, nan_inconsistent, missing_field };

struct VerdictParseFailure {
  VerdictParseReason reason;
  std::string message;
};

std::string to_string(VerdictParseReason reason);

struct VerdictParseResult {
  std::optional<JudgeVerdict> verdict;  // sample_id/level left for the caller
  std::optional<VerdictParseFailure> failure;

  bool ok() const { return verdict.has_value(); }
};

// Strict schema validation of a raw judge response. Total: failures are
// returned, never thrown.
VerdictParseResult parse_verdict(const std::string& raw_text);

struct JudgeFailure {
  std::string sample_id;
  int level = 0;
  std::string kind;  // "parse:<reason>" or "backend"
  std::string message;
};

struct JudgeBatchResult {
  std::vector<JudgeVerdict> verdicts;  // input order
  std::vector<JudgeFailure> failures;
  int backend_calls = 0;
};

struct JudgeBatchOptions {
  BatchOptions batch;
  JudgePromptOptions prompt;
  bool reask_on_parse_failure = true;  // one uncached re-ask per pair
};

// One verdict per (sample, level 1..5); same caching/idempotence
// contract as synthesize_batch.
JudgeBatchResult judge_batch(const std::vector<Sample>& samples, const LevelCatalog& catalog,
                             GenerationBackend& backend, GenerationCache& cache,
                             const BackendParams& params, const JudgeBatchOptions& options);

// The five removal rules. A sample is removed when any of its
// level-verdicts triggers any rule:
//   R1  content_preservation == incorrectly
//   R2  complexity_level == too_easy, except at level 1
//   R3  complexity_level == too_complicated, except at level 5
//   R4  addition factually incorrect or other; factually correct except
//       at level 5
//   R5  information_loss == often, only at level 5
enum class JudgeRule { R1, R2, R3, R4, R5 };

std::string to_string(JudgeRule rule);

struct RuleTrigger {
  int level = 0;
  JudgeRule rule = JudgeRule::R1;
};

struct RemovedSample {
  std::string sample_id;
  std::vector<JudgeRule> rules;  // sorted, unique; all rules the sample triggered
  std::vector<RuleTrigger> triggers;
};

struct JudgeFilterResult {
  DatasetSplit kept;
  std::vector<RemovedSample> removed;
};

// Requires exactly five verdicts per sample. Samples flagged by several
// rules carry every rule they triggered.
JudgeFilterResult apply_judge_filters(const DatasetSplit& split,
                                      const std::vector<JudgeVerdict>& verdicts);

struct OrdinalEncoding {
  std::string criterion;
  std::map<std::string, int> mapping;  // answer -> integer
};

// content_preservation quality-ascending (incorrectly=0..correctly=2),
// frequency scales never=0..often=3, complexity binarized to
// needs_adjustment with the two "a bit" answers and "appropriate"
// counting as 0.
std::vector<OrdinalEncoding> default_ordinal_encodings();

struct EncodedVerdicts {
  std::vector<std::string> columns;
  struct Row {
    std::string sample_id;
    int level = 0;
    std::vector<int> values;
  };
  std::vector<Row> rows;
};

EncodedVerdicts encode_verdicts(const std::vector<JudgeVerdict>& verdicts,
                                const std::vector<OrdinalEncoding>& encodings);

struct CalibrationRow {
  std::string human_op;
  std::string judge_criterion;
  double rho = 0.0;
  double p = 1.0;
  bool defined = true;
  std::size_t n = 0;
  bool significant = false;  // p <= 0.01
  int expected_sign = 0;     // -1 for the content pair, +1 otherwise
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
};

// Spearman correlations between the six edit-operation flags and the
// judge criteria, over verdicts computed on the original model outputs
// of the annotated split.
CalibrationReport calibrate_judge(const std::vector<EditAnnotation>& annotations,
                                  const std::vector<JudgeVerdict>& verdicts);

std::string calibration_report_csv(const CalibrationReport& report);
std::string calibration_report_markdown(const CalibrationReport& report);

// Verdict persistence uses the judge wire vocabulary
// (explanations/definitions, factually_incorrect_information, NaN, ...).
void save_verdicts(const std::vector<JudgeVerdict>& verdicts, const std::filesystem::path& path);
std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path);

// Verdicts as aggregation records (one per criterion, set-valued
// type_of_addition expanded).
std::vector<analysis::LevelRecord> verdict_level_records(const std::vector<JudgeVerdict>& verdicts);

}  // namespace paraforge
