#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace paraforge::metrics {

struct SentenceRange {
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // token index, exclusive

  bool operator==(const SentenceRange&) const = default;
};

// Shared substrate for every metric. Sentence ranges are contiguous,
// non-overlapping, and cover all tokens.
struct TokenizedText {
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<SentenceRange> sentences;
};

// Lowercased abbreviation forms (trailing dot included) that never end a
// sentence and are kept as single tokens.
const std::set<std::string>& default_abbreviations();
std::set<std::string> load_abbreviations(const std::filesystem::path& path);

// Whitespace split, then leading/trailing punctuation detached as
// separate tokens. Sentence boundaries at {. ! ? :} followed by
// whitespace + uppercase or end of text; the abbreviation list suppresses
// false boundaries; a newline always ends a sentence (Leichte Sprache
// uses per-sentence line breaks).
TokenizedText tokenize(const std::string& text);
TokenizedText tokenize(const std::string& text, const std::set<std::string>& abbreviations);

std::size_t sentence_count(const std::string& text);

// True for tokens counted as words (at least one letter or digit).
bool is_word_token(const std::string& token);

// Number of vowel-nucleus groups with vowels {a e i o u ä ö ü y}; adjacent
// vowels form one nucleus, so ei, ie, au, eu, äu, ai, eau (and ee, oo)
// each count once. Floored at 1; letterless input counts as 1.
int count_syllables_de(const std::string& word);

// Amstad's German Flesch Reading Ease: 180 - ASL - 58.5 * ASW over
// tokenize() output, punctuation tokens excluded from word counts.
// Higher means easier. Throws on text without words.
double fre_german(const std::string& text);

// Corpus-level BLEU-4 with add-epsilon smoothing on zero counts and
// brevity penalty exp(1 - r/c) for c < r. Single reference per
// candidate. Range [0, 100].
double bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references);

// SARI with fractional n-gram counts over multiple references.
// Per order n in 1..4: (F1_add + F1_keep + P_del) / 3, averaged over
// orders and samples, x100.
//
// Zero-denominator conventions (frozen; published implementations
// disagree): precision/recall is 1 when both the predicted and the
// target multisets are empty, 0 when only the denominator side is empty;
// F1 is 0 when P + R == 0.
double sari(const std::vector<std::string>& sources, const std::vector<std::string>& candidates,
            const std::vector<std::vector<std::string>>& references);

struct StructuralStats {
  double compression = 0.0;      // mean charlen(candidate)/charlen(source), whitespace-normalized
  double sentence_splits = 0.0;  // mean sentence-count ratio
  double copies = 0.0;           // fraction of whitespace-normalized exact copies
};

StructuralStats structural_stats(const std::vector<std::string>& sources,
                                 const std::vector<std::string>& candidates);

// External semantic-similarity hook. This module never computes
// embeddings itself; scores come from a precomputed file or a remote
// scoring endpoint.
class SemanticScorer {
 public:
  virtual ~SemanticScorer() = default;
  virtual std::vector<double> score(const std::vector<std::string>& ids,
                                    const std::vector<std::string>& candidates,
                                    const std::vector<std::string>& references) = 0;
};

// JSONL {id, score}; throws naming the id when one is missing.
class PrecomputedScoreFile : public SemanticScorer {
 public:
  explicit PrecomputedScoreFile(const std::filesystem::path& path);
  std::vector<double> score(const std::vector<std::string>& ids,
                            const std::vector<std::string>& candidates,
                            const std::vector<std::string>& references) override;

 private:
  std::map<std::string, double> scores_;
};

// POST {pairs:[{candidate, reference}, ...]} -> {scores:[...]}.
class HttpScorer : public SemanticScorer {
 public:
  explicit HttpScorer(std::string url);
  std::vector<double> score(const std::vector<std::string>& ids,
                            const std::vector<std::string>& candidates,
                            const std::vector<std::string>& references) override;

 private:
  std::string url_;
};

std::vector<double> semantic_similarity(const std::vector<std::string>& ids,
                                        const std::vector<std::string>& candidates,
                                        const std::vector<std::string>& references,
                                        SemanticScorer& scorer);

struct PredictionRecord {
  std::string id;
  std::string source;
  std::string candidate;
  std::vector<std::string> references;
};

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
void save_predictions(const std::vector<PredictionRecord>& predictions,
                      const std::filesystem::path& path);

struct PerSampleRow {
  std::string id;
  double fre = 0.0;
  double compression = 0.0;
  double sentence_splits = 0.0;
  bool copy = false;
  std::optional<double> semantic;
};

// Per-system, per-dataset aggregate. fre/compression/sentence_splits/
// copies/semantic_f1 are means of the per-sample rows; bleu and sari are
// corpus-level (n-gram statistics pooled per their definitions, not
// row means).
struct MetricReport {
  std::string system_name;
  std::string dataset_name;
  double bleu = 0.0;
  double sari = 0.0;
  std::optional<double> semantic_f1;
  double fre = 0.0;
  double compression = 0.0;
  double sentence_splits = 0.0;
  double copies = 0.0;
  std::vector<PerSampleRow> per_sample;
};

struct EvaluateOptions {
  std::string system_name = "system";
  std::string dataset_name = "dataset";
  SemanticScorer* scorer = nullptr;  // optional
};

MetricReport evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                  const EvaluateOptions& options = {});

// Writes <base>.csv (aggregates), <base>.per_sample.csv and <base>.md.
void write_report(const MetricReport& report, const std::filesystem::path& base);
std::string report_markdown(const MetricReport& report);

}  // namespace paraforge::metrics
