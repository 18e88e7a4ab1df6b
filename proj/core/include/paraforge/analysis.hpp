#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paraforge/complexity.hpp"
#include "paraforge/corpus.hpp"

namespace paraforge::analysis {

enum class AgreementScale { nominal, ordinal, nominal_with_tolerance };

// Partial multi-rater matrix: values[annotator][unit] may be absent.
struct RatingMatrix {
  std::vector<std::string> units;
  std::vector<std::string> annotators;
  std::vector<std::vector<std::optional<int>>> values;  // [annotator][unit]
  AgreementScale scale = AgreementScale::nominal;
  int tolerance = 1;  // only for nominal_with_tolerance

  void set(std::size_t annotator, std::size_t unit, int value);
};

RatingMatrix make_matrix(std::size_t annotators, std::size_t units,
                         AgreementScale scale = AgreementScale::nominal, int tolerance = 1);

// Krippendorff's alpha via the coincidence-matrix formulation. Units
// with fewer than two ratings are dropped. Difference functions:
//   nominal                  delta(a,b) = [a != b]
//   ordinal                  squared cumulative-marginal distance
//   nominal_with_tolerance   delta(a,b) = 0 if |a-b| <= k else 1
// Unanimous data yields 1.0. Throws when no unit has two ratings.
double krippendorff_alpha(const RatingMatrix& matrix);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;
  bool defined = true;  // false when either ranking has zero variance
};

// Spearman rank correlation: Pearson over average ranks (ties get mean
// rank). Two-sided p-value: exact permutation enumeration for n <= 8,
// Student-t approximation (via the regularized incomplete beta) above.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

// Both p-value routes, exposed for consistency checks.
double spearman_exact_p(const std::vector<double>& x, const std::vector<double>& y);
double spearman_t_approx_p(double rho, std::size_t n);

std::vector<double> average_ranks(const std::vector<double>& values);

// One answer of one question for one (sample, level) pair; the common
// shape of human ratings and judge verdicts for aggregation.
struct LevelRecord {
  ComplexityLevel level{1};
  std::string question;
  std::string answer;
};

struct LevelDistribution {
  std::string question;
  int level = 0;
  std::map<std::string, double> shares;  // answer -> fraction
  std::size_t n = 0;
};

// Normalized per-question answer distributions for each level 1..5.
std::vector<LevelDistribution> aggregate_by_level(const std::vector<LevelRecord>& records);

void write_level_report_csv(const std::vector<LevelDistribution>& report,
                            const std::filesystem::path& path);
std::string level_report_markdown(const std::vector<LevelDistribution>& report);

// Ratings CSV: annotator_id,sample_id,level,question,answer — one row
// per answered question.
struct RatingRow {
  std::string annotator_id;
  std::string sample_id;
  int level = 0;
  std::string question;  // q1..q5
  std::string answer;    // q4: semicolon-joined multi-select
};

std::vector<RatingRow> load_ratings_csv(const std::filesystem::path& path);

// Groups rows into HumanRating records, enforcing the q3/q4 skip rule
// (q4 present iff q3 != never).
std::vector<HumanRating> assemble_human_ratings(const std::vector<RatingRow>& rows);

// Builds the per-question agreement matrix; units are (sample, level)
// pairs, values the ordinal encoding of the answers.
RatingMatrix rating_matrix_for_question(const std::vector<RatingRow>& rows,
                                        const std::string& question, AgreementScale scale,
                                        int tolerance = 1);

// The ordinal value of an answer string for q1/q2/q3/q5.
int encode_answer(const std::string& question, const std::string& answer);

std::vector<LevelRecord> rating_level_records(const std::vector<RatingRow>& rows);

}  // namespace paraforge::analysis
