#include "paraforge/analysis.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "paraforge/errors.hpp"

namespace paraforge::analysis {

void RatingMatrix::set(std::size_t annotator, std::size_t unit, int value) {
  values.at(annotator).at(unit) = value;
}

RatingMatrix make_matrix(std::size_t annotators, std::size_t units, AgreementScale scale,
                         int tolerance) {
  RatingMatrix m;
  m.scale = scale;
  m.tolerance = tolerance;
  for (std::size_t a = 0; a < annotators; ++a) m.annotators.push_back("a" + std::to_string(a));
  for (std::size_t u = 0; u < units; ++u) m.units.push_back("u" + std::to_string(u));
  m.values.assign(annotators, std::vector<std::optional<int>>(units));
  return m;
}

double krippendorff_alpha(const RatingMatrix& matrix) {
  // value domain = sorted distinct rated values
  std::set<int> domain_set;
  for (const auto& row : matrix.values) {
    for (const auto& v : row) {
      if (v) domain_set.insert(*v);
    }
  }
  std::vector<int> domain(domain_set.begin(), domain_set.end());
  std::map<int, std::size_t> value_index;
  for (std::size_t i = 0; i < domain.size(); ++i) value_index[domain[i]] = i;
  const std::size_t v = domain.size();

  // coincidence matrix: each ordered pair of distinct raters in a unit
  // contributes 1/(m_u - 1)
  std::vector<std::vector<double>> o(v, std::vector<double>(v, 0.0));
  bool any_pairable = false;
  const std::size_t unit_count = matrix.units.size();
  for (std::size_t u = 0; u < unit_count; ++u) {
    std::vector<int> ratings;
    for (const auto& row : matrix.values) {
      if (u < row.size() && row[u]) ratings.push_back(*row[u]);
    }
    if (ratings.size() < 2) continue;  // unpairable unit
    any_pairable = true;
    double weight = 1.0 / static_cast<double>(ratings.size() - 1);
    for (std::size_t i = 0; i < ratings.size(); ++i) {
      for (std::size_t j = 0; j < ratings.size(); ++j) {
        if (i == j) continue;
        o[value_index[ratings[i]]][value_index[ratings[j]]] += weight;
      }
    }
  }
  if (!any_pairable) throw ValidationError("krippendorff_alpha: no pairable values");

  std::vector<double> marginal(v, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) marginal[c] += o[c][k];
    n += marginal[c];
  }

  auto delta = [&](std::size_t c, std::size_t k) -> double {
    if (c == k) return 0.0;
    switch (matrix.scale) {
      case AgreementScale::nominal:
        return 1.0;
      case AgreementScale::nominal_with_tolerance:
        return std::abs(domain[c] - domain[k]) <= matrix.tolerance ? 0.0 : 1.0;
      case AgreementScale::ordinal: {
        std::size_t lo = std::min(c, k), hi = std::max(c, k);
        double cum = 0.0;
        for (std::size_t g = lo; g <= hi; ++g) cum += marginal[g];
        cum -= (marginal[lo] + marginal[hi]) / 2.0;
        return cum * cum;
      }
    }
    return 1.0;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) {
      double d = delta(c, k);
      observed += o[c][k] * d;
      expected += marginal[c] * marginal[k] * d;
    }
  }
  double d_o = observed / n;
  double d_e = expected / (n * (n - 1.0));
  if (d_e == 0.0) return 1.0;  // unanimous data: no disagreement is expressible
  return 1.0 - d_o / d_e;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Pearson correlation; NaN when either side has zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

constexpr std::size_t kExactPermutationLimit = 8;

double permutation_p(const std::vector<double>& rank_x, const std::vector<double>& rank_y,
                     double rho_obs) {
  const std::size_t n = rank_x.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> permuted(n);
  long total = 0;
  long at_least = 0;
  do {
    for (std::size_t i = 0; i < n; ++i) permuted[i] = rank_y[perm[i]];
    double rho = pearson(rank_x, permuted);
    ++total;
    if (std::abs(rho) >= std::abs(rho_obs) - 1e-12) ++at_least;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace

double spearman_exact_p(const std::vector<double>& x, const std::vector<double>& y) {
  auto rank_x = average_ranks(x);
  auto rank_y = average_ranks(y);
  double rho = pearson(rank_x, rank_y);
  if (std::isnan(rho)) throw ValidationError("spearman: zero variance, rho undefined");
  return permutation_p(rank_x, rank_y, rho);
}

double spearman_t_approx_p(double rho, std::size_t n) {
  if (n < 3) throw ValidationError("spearman: need at least 3 observations");
  double r2 = rho * rho;
  if (r2 >= 1.0) return 0.0;
  double t = rho * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r2));
  boost::math::students_t dist(static_cast<double>(n) - 2.0);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 3) throw ValidationError("spearman: need at least 3 observations");

  auto rank_x = average_ranks(x);
  auto rank_y = average_ranks(y);
  double rho = pearson(rank_x, rank_y);
  if (std::isnan(rho)) {
    return SpearmanResult{std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN(), false};
  }
  double p = x.size() <= kExactPermutationLimit ? permutation_p(rank_x, rank_y, rho)
                                                : spearman_t_approx_p(rho, x.size());
  return SpearmanResult{rho, p, true};
}

std::vector<LevelDistribution> aggregate_by_level(const std::vector<LevelRecord>& records) {
  // (question, level) -> answer counts
  std::map<std::pair<std::string, int>, std::map<std::string, std::size_t>> counts;
  for (const auto& rec : records) {
    counts[{rec.question, rec.level.value()}][rec.answer] += 1;
  }
  std::vector<LevelDistribution> out;
  for (const auto& [key, answers] : counts) {
    LevelDistribution dist;
    dist.question = key.first;
    dist.level = key.second;
    for (const auto& [answer, count] : answers) dist.n += count;
    for (const auto& [answer, count] : answers) {
      dist.shares[answer] = static_cast<double>(count) / static_cast<double>(dist.n);
    }
    out.push_back(std::move(dist));
  }
  return out;
}

void write_level_report_csv(const std::vector<LevelDistribution>& report,
                            const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write level report: " + path.string());
  out << "question,level,answer,share,n\n";
  for (const auto& dist : report) {
    for (const auto& [answer, share] : dist.shares) {
      out << dist.question << ',' << dist.level << ',' << answer << ',' << share << ',' << dist.n
          << '\n';
    }
  }
}

std::string level_report_markdown(const std::vector<LevelDistribution>& report) {
  // one table per question, levels as rows
  std::map<std::string, std::vector<const LevelDistribution*>> by_question;
  for (const auto& dist : report) by_question[dist.question].push_back(&dist);

  std::ostringstream os;
  for (const auto& [question, dists] : by_question) {
    std::set<std::string> answers;
    for (const auto* d : dists) {
      for (const auto& [answer, _] : d->shares) answers.insert(answer);
    }
    os << "### " << question << "\n\n| level |";
    for (const auto& a : answers) os << ' ' << a << " |";
    os << " n |\n|---|";
    for (std::size_t i = 0; i < answers.size(); ++i) os << "---|";
    os << "---|\n";
    for (const auto* d : dists) {
      os << "| " << d->level << " |";
      for (const auto& a : answers) {
        auto it = d->shares.find(a);
        os << ' ' << (it == d->shares.end() ? 0.0 : it->second) << " |";
      }
      os << ' ' << d->n << " |\n";
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> parse_csv_line(const std::string& line, std::size_t number) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ValidationError("unterminated quote (line " + std::to_string(number) + ")");
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::vector<RatingRow> load_ratings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings: " + path.string());
  std::string line;
  std::size_t number = 0;
  std::vector<RatingRow> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = parse_csv_line(line, number);
    if (!header_seen) {
      header_seen = true;
      if (fields != std::vector<std::string>{"annotator_id", "sample_id", "level", "question",
                                             "answer"}) {
        throw ValidationError("ratings " + path.string() +
                              ": expected header annotator_id,sample_id,level,question,answer");
      }
      continue;
    }
    if (fields.size() != 5) {
      throw ValidationError("ratings " + path.string() + " (line " + std::to_string(number) +
                            "): expected 5 fields");
    }
    RatingRow row;
    row.annotator_id = fields[0];
    row.sample_id = fields[1];
    try {
      row.level = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw ValidationError("ratings " + path.string() + " (line " + std::to_string(number) +
                            "): bad level");
    }
    (void)ComplexityLevel(row.level);  // range check
    row.question = fields[3];
    row.answer = fields[4];
    if (row.question != "q1" && row.question != "q2" && row.question != "q3" &&
        row.question != "q4" && row.question != "q5") {
      throw ValidationError("ratings " + path.string() + " (line " + std::to_string(number) +
                            "): unknown question '" + row.question + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int encode_answer(const std::string& question, const std::string& answer) {
  static const std::map<std::string, int> q1 = {
      {"incorrectly", 0}, {"approximately", 1}, {"correctly", 2}};
  static const std::map<std::string, int> freq = {
      {"never", 0}, {"seldom", 1}, {"sometimes", 2}, {"often", 3}};
  static const std::map<std::string, int> q5 = {{"too_easy", 0},
                                                {"a_bit_too_easy", 1},
                                                {"appropriate", 2},
                                                {"a_bit_too_complicated", 3},
                                                {"too_complicated", 4}};
  const std::map<std::string, int>* table = nullptr;
  if (question == "q1") table = &q1;
  else if (question == "q2" || question == "q3") table = &freq;
  else if (question == "q5") table = &q5;
  else throw ValidationError("no ordinal encoding for question '" + question + "'");
  auto it = table->find(answer);
  if (it == table->end()) {
    throw ValidationError("unknown answer '" + answer + "' for question " + question);
  }
  return it->second;
}

std::vector<HumanRating> assemble_human_ratings(const std::vector<RatingRow>& rows) {
  struct Key {
    std::string annotator, sample;
    int level;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::map<std::string, std::string>> grouped;
  for (const auto& row : rows) {
    auto& answers = grouped[Key{row.annotator_id, row.sample_id, row.level}];
    if (!answers.emplace(row.question, row.answer).second) {
      throw ValidationError("duplicate answer for (" + row.annotator_id + ", " + row.sample_id +
                            ", level " + std::to_string(row.level) + ", " + row.question + ")");
    }
  }

  auto parse_addition_type = [](const std::string& s) {
    if (s == "embellishment") return AdditionType::embellishment;
    if (s == "explanations_definitions") return AdditionType::explanations_definitions;
    if (s == "factually_incorrect") return AdditionType::factually_incorrect;
    if (s == "factually_correct") return AdditionType::factually_correct;
    if (s == "other") return AdditionType::other;
    throw ValidationError("unknown q4 type '" + s + "'");
  };

  std::vector<HumanRating> out;
  for (const auto& [key, answers] : grouped) {
    HumanRating rating;
    rating.annotator_id = key.annotator;
    rating.sample_id = key.sample;
    rating.level = ComplexityLevel(key.level);
    for (const char* required : {"q1", "q2", "q3", "q5"}) {
      if (!answers.count(required)) {
        throw ValidationError("missing " + std::string(required) + " for (" + key.annotator + ", " +
                              key.sample + ", level " + std::to_string(key.level) + ")");
      }
    }
    rating.q1_content = static_cast<Q1Content>(encode_answer("q1", answers.at("q1")));
    rating.q2_loss = static_cast<Frequency>(encode_answer("q2", answers.at("q2")));
    rating.q3_addition = static_cast<Frequency>(encode_answer("q3", answers.at("q3")));
    rating.q5_complexity = static_cast<Q5Complexity>(encode_answer("q5", answers.at("q5")));
    auto q4 = answers.find("q4");
    if (q4 != answers.end() && !q4->second.empty()) {
      std::stringstream ss(q4->second);
      std::string part;
      while (std::getline(ss, part, ';')) rating.q4_types.insert(parse_addition_type(part));
    }
    // Q4 is skipped exactly when Q3 answered "never"
    bool q3_never = rating.q3_addition == Frequency::never;
    if (q3_never != rating.q4_types.empty()) {
      throw ValidationError("q4 answers inconsistent with q3 for (" + key.annotator + ", " +
                            key.sample + ", level " + std::to_string(key.level) + ")");
    }
    out.push_back(std::move(rating));
  }
  return out;
}

RatingMatrix rating_matrix_for_question(const std::vector<RatingRow>& rows,
                                        const std::string& question, AgreementScale scale,
                                        int tolerance) {
  std::vector<std::string> annotators;
  std::vector<std::string> units;
  std::map<std::string, std::size_t> annotator_index;
  std::map<std::string, std::size_t> unit_index;
  for (const auto& row : rows) {
    if (row.question != question) continue;
    if (!annotator_index.count(row.annotator_id)) {
      annotator_index[row.annotator_id] = annotators.size();
      annotators.push_back(row.annotator_id);
    }
    std::string unit = row.sample_id + "#" + std::to_string(row.level);
    if (!unit_index.count(unit)) {
      unit_index[unit] = units.size();
      units.push_back(unit);
    }
  }
  RatingMatrix m;
  m.scale = scale;
  m.tolerance = tolerance;
  m.annotators = annotators;
  m.units = units;
  m.values.assign(annotators.size(), std::vector<std::optional<int>>(units.size()));
  for (const auto& row : rows) {
    if (row.question != question) continue;
    std::string unit = row.sample_id + "#" + std::to_string(row.level);
    m.values[annotator_index[row.annotator_id]][unit_index[unit]] =
        encode_answer(question, row.answer);
  }
  return m;
}

std::vector<LevelRecord> rating_level_records(const std::vector<RatingRow>& rows) {
  std::vector<LevelRecord> records;
  for (const auto& row : rows) {
    if (row.question == "q4") {
      std::stringstream ss(row.answer);
      std::string part;
      while (std::getline(ss, part, ';')) {
        if (!part.empty()) records.push_back({ComplexityLevel(row.level), row.question, part});
      }
    } else {
      records.push_back({ComplexityLevel(row.level), row.question, row.answer});
    }
  }
  return records;
}

}  // namespace paraforge::analysis
