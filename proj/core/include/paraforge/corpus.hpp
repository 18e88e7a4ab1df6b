#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "paraforge/complexity.hpp"

namespace paraforge {

struct SourceMeta {
  std::string page_title;
  long popularity_rank = 0;
  long word_count = 0;

  bool operator==(const SourceMeta&) const = default;
};

// One source paragraph with its per-level paraphrases.
struct Sample {
  std::string id;
  std::string original;
  std::map<ComplexityLevel, std::string> paraphrases;
  std::optional<std::string> ls_paraphrase;  // Leichte Sprache rewrite, corrected split only
  SourceMeta source_meta;

  bool operator==(const Sample&) const = default;

  // True when all five levels are present and non-empty.
  bool is_complete() const;
};

struct EditOps {
  bool removed_info = false;
  bool added_info = false;
  bool corrected_info = false;
  bool adjusted_complexity = false;
  bool corrected_language = false;
  bool hallucination_in_origin = false;

  bool operator==(const EditOps&) const = default;
  bool any() const {
    return removed_info || added_info || corrected_info || adjusted_complexity ||
           corrected_language || hallucination_in_origin;
  }
};

// One row of the annotated split: a model output, its manual correction,
// and the six edit-operation flags.
struct EditAnnotation {
  std::string sample_id;
  ComplexityLevel level{1};
  std::string original;
  std::string model_output;
  std::string corrected_output;
  EditOps ops;

  bool operator==(const EditAnnotation&) const = default;
};

enum class Q1Content { incorrectly, approximately, correctly };
enum class Frequency { never, seldom, sometimes, often };
// nan_marker is the judge schema's explicit "no addition" answer; human
// ratings express the same thing by skipping Q4.
enum class AdditionType {
  embellishment,
  explanations_definitions,
  factually_incorrect,
  factually_correct,
  other,
  nan_marker
};
enum class Q5Complexity { too_easy, a_bit_too_easy, appropriate, a_bit_too_complicated, too_complicated };

// One annotator's answers for one (sample, level) pair.
struct HumanRating {
  std::string annotator_id;
  std::string sample_id;
  ComplexityLevel level{1};
  Q1Content q1_content = Q1Content::correctly;
  Frequency q2_loss = Frequency::never;
  Frequency q3_addition = Frequency::never;
  std::set<AdditionType> q4_types;  // empty iff q3_addition == never
  Q5Complexity q5_complexity = Q5Complexity::appropriate;
};

enum class SplitSchema {
  source,     // samples without paraphrases (ingest output)
  main,       // five levels required, no LS
  corrected,  // five levels + LS required
  annotated,  // EditAnnotation records
  lenient,    // any subset of levels, optional LS
};

struct DatasetSplit {
  std::string name;
  std::variant<std::vector<Sample>, std::vector<EditAnnotation>> records;

  std::vector<Sample>& samples() { return std::get<std::vector<Sample>>(records); }
  const std::vector<Sample>& samples() const { return std::get<std::vector<Sample>>(records); }
  std::vector<EditAnnotation>& annotations() { return std::get<std::vector<EditAnnotation>>(records); }
  const std::vector<EditAnnotation>& annotations() const {
    return std::get<std::vector<EditAnnotation>>(records);
  }
  bool holds_samples() const { return std::holds_alternative<std::vector<Sample>>(records); }
  std::size_t size() const;
};

// Loads one record per line, validating type invariants against `schema`.
// Errors name the offending line number and sample id.
DatasetSplit load_split(const std::filesystem::path& path, SplitSchema schema);

// Fixed key order, UTF-8, one record per line, LF endings. Round-trip
// stable: load(save(s)) == s and repeated saves are byte-identical.
void save_split(const DatasetSplit& split, const std::filesystem::path& path);

// Sample ids of a split, in record order.
std::vector<std::string> split_ids(const DatasetSplit& split);

// Enforces the main/corrected disjointness invariant; throws listing the
// overlapping ids.
void validate_disjoint(const DatasetSplit& a, const DatasetSplit& b);

std::string to_string(Q1Content v);
std::string to_string(Frequency v);
std::string to_string(AdditionType v);
std::string to_string(Q5Complexity v);

}  // namespace paraforge
