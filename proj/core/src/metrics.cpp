#include "paraforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "paraforge/errors.hpp"
#include "paraforge/jsonl.hpp"
#include "paraforge/text.hpp"

namespace paraforge::metrics {

namespace {

using paraforge::text::decode_utf8;
using paraforge::text::encode_utf8;
using paraforge::text::is_ascii_space;
using paraforge::text::is_digit;
using paraforge::text::is_letter;
using paraforge::text::is_punct;
using paraforge::text::is_upper;
using paraforge::text::to_lower;

struct RawToken {
  std::string text;
  bool last_in_chunk = false;
  bool newline_after = false;  // set on the last token of a chunk whose gap held '\n'
};

bool is_terminator(const std::string& tok) {
  return tok == "." || tok == "!" || tok == "?" || tok == ":";
}

bool starts_uppercase(const std::string& tok) {
  auto cps = decode_utf8(tok);
  return !cps.empty() && is_upper(cps[0]);
}

std::vector<RawToken> raw_tokens(const std::string& raw, const std::set<std::string>& abbreviations) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    // leading gap
    bool gap_newline = false;
    while (i < n && is_ascii_space(static_cast<unsigned char>(raw[i]))) {
      if (raw[i] == '\n') gap_newline = true;
      ++i;
    }
    if (!out.empty() && gap_newline) out.back().newline_after = true;
    if (i >= n) break;
    std::size_t start = i;
    while (i < n && !is_ascii_space(static_cast<unsigned char>(raw[i]))) ++i;
    std::string chunk = raw.substr(start, i - start);

    auto cps = decode_utf8(chunk);
    std::size_t lo = 0, hi = cps.size();
    std::vector<std::string> chunk_tokens;
    while (lo < hi && is_punct(cps[lo])) {
      chunk_tokens.push_back(encode_utf8({cps[lo]}));
      ++lo;
    }
    std::vector<char32_t> core(cps.begin() + static_cast<std::ptrdiff_t>(lo),
                               cps.begin() + static_cast<std::ptrdiff_t>(hi));
    std::string core_str = encode_utf8(core);
    if (!core_str.empty() && abbreviations.count(paraforge::text::lowercase(core_str))) {
      chunk_tokens.push_back(core_str);
    } else {
      std::vector<std::string> trailing;
      while (hi > lo && is_punct(cps[hi - 1])) {
        trailing.push_back(encode_utf8({cps[hi - 1]}));
        --hi;
      }
      if (hi > lo) {
        chunk_tokens.push_back(encode_utf8(std::vector<char32_t>(
            cps.begin() + static_cast<std::ptrdiff_t>(lo), cps.begin() + static_cast<std::ptrdiff_t>(hi))));
      }
      for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) chunk_tokens.push_back(*it);
    }
    for (std::size_t t = 0; t < chunk_tokens.size(); ++t) {
      RawToken rt;
      rt.text = std::move(chunk_tokens[t]);
      rt.last_in_chunk = (t + 1 == chunk_tokens.size());
      out.push_back(std::move(rt));
    }
  }
  return out;
}

}  // namespace

const std::set<std::string>& default_abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "z.b.",  "bzw.",  "dr.",    "nr.",    "ca.",   "u.a.",  "usw.",   "etc.", "d.h.",
      "vgl.",  "ggf.",  "evtl.",  "inkl.",  "bspw.", "sog.",  "mio.",   "mrd.", "abs.",
      "art.",  "hr.",   "prof.",  "dipl.",  "st.",   "jh.",   "o.ä.",   "u.ä.", "z.t.",
      "i.d.r.", "bzgl.", "max.",  "min.",   "geb.",  "gest.", "bd.",    "s.",   "o.g.",
  };
  return kAbbrev;
}

std::set<std::string> load_abbreviations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation list: " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.insert(paraforge::text::lowercase(line));
  }
  return out;
}

TokenizedText tokenize(const std::string& raw) { return tokenize(raw, default_abbreviations()); }

TokenizedText tokenize(const std::string& raw, const std::set<std::string>& abbreviations) {
  TokenizedText out;
  out.raw = raw;
  auto raws = raw_tokens(raw, abbreviations);
  out.tokens.reserve(raws.size());
  for (const auto& rt : raws) out.tokens.push_back(rt.text);

  std::size_t sentence_begin = 0;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    bool boundary = false;
    if (raws[i].newline_after) {
      boundary = true;
    } else if (is_terminator(raws[i].text) && raws[i].last_in_chunk) {
      if (i + 1 == raws.size() || starts_uppercase(raws[i + 1].text)) boundary = true;
    }
    if (i + 1 == raws.size()) boundary = true;
    if (boundary) {
      out.sentences.push_back(SentenceRange{sentence_begin, i + 1});
      sentence_begin = i + 1;
    }
  }
  return out;
}

std::size_t sentence_count(const std::string& text) { return tokenize(text).sentences.size(); }

bool is_word_token(const std::string& token) {
  for (char32_t cp : decode_utf8(token)) {
    if (is_letter(cp) || is_digit(cp)) return true;
  }
  return false;
}

int count_syllables_de(const std::string& word) {
  auto is_vowel = [](char32_t cp) {
    cp = to_lower(cp);
    return cp == U'a' || cp == U'e' || cp == U'i' || cp == U'o' || cp == U'u' || cp == U'y' ||
           cp == 0xE4 || cp == 0xF6 || cp == 0xFC;  // ä ö ü
  };
  int groups = 0;
  bool in_group = false;
  for (char32_t cp : decode_utf8(word)) {
    if (is_vowel(cp)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  return std::max(groups, 1);
}

double fre_german(const std::string& input) {
  auto tok = tokenize(input);
  long words = 0;
  long syllables = 0;
  for (const auto& t : tok.tokens) {
    if (!is_word_token(t)) continue;
    ++words;
    syllables += count_syllables_de(t);
  }
  if (words == 0 || tok.sentences.empty()) {
    throw ValidationError("fre_german requires at least one word and one sentence");
  }
  double asl = static_cast<double>(words) / static_cast<double>(tok.sentences.size());
  double asw = static_cast<double>(syllables) / static_cast<double>(words);
  return 180.0 - asl - 58.5 * asw;
}

namespace {

constexpr double kBleuEpsilon = 1e-9;
constexpr int kMaxOrder = 4;

// n-grams as joined strings; \x1F never occurs in tokens (it is a control
// character and would have been split off as its own chunk anyway).
std::unordered_map<std::string, double> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::unordered_map<std::string, double> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1F');
      key += tokens[i + k];
    }
    counts[key] += 1.0;
  }
  return counts;
}

}  // namespace

double bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references) {
  if (candidates.size() != references.size()) {
    throw ValidationError("bleu: candidate/reference count mismatch");
  }
  if (candidates.empty()) throw ValidationError("bleu: empty corpus");

  double matched[kMaxOrder] = {};
  double total[kMaxOrder] = {};
  long cand_len = 0;
  long ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto cand = tokenize(candidates[i]).tokens;
    auto ref = tokenize(references[i]).tokens;
    cand_len += static_cast<long>(cand.size());
    ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      auto cc = ngram_counts(cand, n);
      auto rc = ngram_counts(ref, n);
      for (const auto& [gram, count] : cc) {
        auto it = rc.find(gram);
        if (it != rc.end()) matched[n - 1] += std::min(count, it->second);
        total[n - 1] += count;
      }
    }
  }
  if (cand_len == 0) return 0.0;

  double log_sum = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    double p = (matched[n] > 0.0 && total[n] > 0.0) ? matched[n] / total[n] : kBleuEpsilon;
    log_sum += std::log(p);
  }
  double bp = cand_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  return 100.0 * bp * std::exp(log_sum / kMaxOrder);
}

namespace {

using Counts = std::unordered_map<std::string, double>;

double sum_values(const Counts& c) {
  double s = 0.0;
  for (const auto& [k, v] : c) s += v;
  return s;
}

// min over shared keys; zero entries dropped
Counts clipped_min(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end()) {
      double m = std::min(v, it->second);
      if (m > 0.0) out[k] = m;
    }
  }
  return out;
}

Counts positive_diff(const Counts& a, const Counts& b) {
  Counts out;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    double d = v - (it == b.end() ? 0.0 : it->second);
    if (d > 0.0) out[k] = d;
  }
  return out;
}

double safe_ratio(double num, double denom, double other_set) {
  if (denom > 0.0) return num / denom;
  return other_set == 0.0 ? 1.0 : 0.0;
}

double f1(double p, double r) { return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

double sari(const std::vector<std::string>& sources, const std::vector<std::string>& candidates,
            const std::vector<std::vector<std::string>>& references) {
  if (sources.size() != candidates.size() || sources.size() != references.size()) {
    throw ValidationError("sari: misaligned input lists");
  }
  if (sources.empty()) throw ValidationError("sari: empty corpus");

  double corpus_sum = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (references[i].empty()) {
      throw ValidationError("sari: sample " + std::to_string(i) + " has no references");
    }
    auto src = tokenize(sources[i]).tokens;
    auto cand = tokenize(candidates[i]).tokens;
    std::vector<std::vector<std::string>> refs;
    refs.reserve(references[i].size());
    for (const auto& r : references[i]) refs.push_back(tokenize(r).tokens);
    const double r_count = static_cast<double>(refs.size());

    double order_sum = 0.0;
    for (int n = 1; n <= kMaxOrder; ++n) {
      Counts s_counts = ngram_counts(src, n);
      Counts c_counts = ngram_counts(cand, n);
      Counts ref_avg;  // fractional counts: mean across references
      for (const auto& ref : refs) {
        for (const auto& [gram, count] : ngram_counts(ref, n)) ref_avg[gram] += count / r_count;
      }

      // KEEP: candidate keeps min(S,C); references keep min(S, Ravg)
      Counts keep_cand = clipped_min(s_counts, c_counts);
      Counts keep_ref = clipped_min(s_counts, ref_avg);
      Counts keep_match = clipped_min(keep_cand, keep_ref);
      double keep_p = safe_ratio(sum_values(keep_match), sum_values(keep_cand), sum_values(keep_ref));
      double keep_r = safe_ratio(sum_values(keep_match), sum_values(keep_ref), sum_values(keep_cand));

      // ADD: n-grams beyond the source
      Counts add_cand = positive_diff(c_counts, s_counts);
      Counts add_ref = positive_diff(ref_avg, s_counts);
      Counts add_match = clipped_min(add_cand, add_ref);
      double add_p = safe_ratio(sum_values(add_match), sum_values(add_cand), sum_values(add_ref));
      double add_r = safe_ratio(sum_values(add_match), sum_values(add_ref), sum_values(add_cand));

      // DEL: n-grams dropped from the source; precision only
      Counts del_cand = positive_diff(s_counts, c_counts);
      Counts del_ref = positive_diff(s_counts, ref_avg);
      Counts del_match = clipped_min(del_cand, del_ref);
      double del_p = safe_ratio(sum_values(del_match), sum_values(del_cand), sum_values(del_ref));

      order_sum += (f1(add_p, add_r) + f1(keep_p, keep_r) + del_p) / 3.0;
    }
    corpus_sum += order_sum / kMaxOrder;
  }
  return 100.0 * corpus_sum / static_cast<double>(sources.size());
}

StructuralStats structural_stats(const std::vector<std::string>& sources,
                                 const std::vector<std::string>& candidates) {
  if (sources.size() != candidates.size()) {
    throw ValidationError("structural_stats: misaligned input lists");
  }
  if (sources.empty()) throw ValidationError("structural_stats: empty corpus");

  double compression = 0.0, splits = 0.0, copies = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    std::string src = paraforge::text::normalize_whitespace(sources[i]);
    std::string cand = paraforge::text::normalize_whitespace(candidates[i]);
    if (src.empty()) throw ValidationError("structural_stats: zero-length source at " + std::to_string(i));
    compression += static_cast<double>(paraforge::text::codepoint_count(cand)) /
                   static_cast<double>(paraforge::text::codepoint_count(src));
    double src_sentences = static_cast<double>(sentence_count(sources[i]));
    double cand_sentences = static_cast<double>(sentence_count(candidates[i]));
    splits += src_sentences > 0.0 ? cand_sentences / src_sentences : 0.0;
    if (cand == src) copies += 1.0;
  }
  const double n = static_cast<double>(sources.size());
  return StructuralStats{compression / n, splits / n, copies / n};
}

PrecomputedScoreFile::PrecomputedScoreFile(const std::filesystem::path& path) {
  for (const auto& line : jsonl::read_lines(path)) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.text);
      scores_[rec.at("id").get<std::string>()] = rec.at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("score file " + path.string() + " (line " +
                            std::to_string(line.number) + "): " + e.what());
    }
  }
}

std::vector<double> PrecomputedScoreFile::score(const std::vector<std::string>& ids,
                                                const std::vector<std::string>&,
                                                const std::vector<std::string>&) {
  std::vector<double> out;
  out.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = scores_.find(id);
    if (it == scores_.end()) throw ValidationError("no precomputed score for id '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> semantic_similarity(const std::vector<std::string>& ids,
                                        const std::vector<std::string>& candidates,
                                        const std::vector<std::string>& references,
                                        SemanticScorer& scorer) {
  if (ids.size() != candidates.size() || ids.size() != references.size()) {
    throw ValidationError("semantic_similarity: misaligned input lists");
  }
  auto scores = scorer.score(ids, candidates, references);
  if (scores.size() != ids.size()) {
    throw ValidationError("scorer returned " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(ids.size()) + " pairs");
  }
  return scores;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  for (const auto& line : jsonl::read_lines(path)) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.text);
      PredictionRecord p;
      p.id = rec.at("id").get<std::string>();
      p.source = rec.at("source").get<std::string>();
      p.candidate = rec.at("candidate").get<std::string>();
      p.references = rec.at("references").get<std::vector<std::string>>();
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("predictions " + path.string() + " (line " +
                            std::to_string(line.number) + "): " + e.what());
    }
  }
  return out;
}

void save_predictions(const std::vector<PredictionRecord>& predictions,
                      const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(predictions.size());
  for (const auto& p : predictions) {
    nlohmann::ordered_json rec;
    rec["id"] = p.id;
    rec["source"] = p.source;
    rec["candidate"] = p.candidate;
    rec["references"] = p.references;
    lines.push_back(rec.dump());
  }
  jsonl::write_lines(path, lines);
}

MetricReport evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                  const EvaluateOptions& options) {
  if (predictions.empty()) throw ValidationError("evaluate_predictions: no predictions");
  MetricReport report;
  report.system_name = options.system_name;
  report.dataset_name = options.dataset_name;

  std::vector<std::string> ids, sources, candidates, first_refs;
  std::vector<std::vector<std::string>> all_refs;
  for (const auto& p : predictions) {
    if (p.references.empty()) {
      throw ValidationError("prediction '" + p.id + "' has no references");
    }
    ids.push_back(p.id);
    sources.push_back(p.source);
    candidates.push_back(p.candidate);
    first_refs.push_back(p.references.front());
    all_refs.push_back(p.references);
  }

  report.bleu = bleu(candidates, first_refs);
  report.sari = sari(sources, candidates, all_refs);

  std::vector<double> semantic;
  if (options.scorer) {
    semantic = semantic_similarity(ids, candidates, first_refs, *options.scorer);
  }

  double fre_sum = 0.0, compression_sum = 0.0, splits_sum = 0.0, copies_sum = 0.0, sem_sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    PerSampleRow row;
    row.id = ids[i];
    row.fre = fre_german(candidates[i]);
    auto one = structural_stats({sources[i]}, {candidates[i]});
    row.compression = one.compression;
    row.sentence_splits = one.sentence_splits;
    row.copy = one.copies > 0.5;
    if (options.scorer) {
      row.semantic = semantic[i];
      sem_sum += semantic[i];
    }
    fre_sum += row.fre;
    compression_sum += row.compression;
    splits_sum += row.sentence_splits;
    copies_sum += row.copy ? 1.0 : 0.0;
    report.per_sample.push_back(std::move(row));
  }
  const double n = static_cast<double>(predictions.size());
  report.fre = fre_sum / n;
  report.compression = compression_sum / n;
  report.sentence_splits = splits_sum / n;
  report.copies = copies_sum / n;
  if (options.scorer) report.semantic_f1 = sem_sum / n;
  return report;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string report_markdown(const MetricReport& r) {
  std::ostringstream os;
  os << "| System | Dataset | BLEU | SARI | Sem_F1 | FRE | Compression | Sent. splits | Copies |\n";
  os << "|---|---|---|---|---|---|---|---|---|\n";
  os << "| " << r.system_name << " | " << r.dataset_name << " | " << fmt(r.bleu) << " | "
     << fmt(r.sari) << " | " << (r.semantic_f1 ? fmt(*r.semantic_f1) : std::string("-")) << " | "
     << fmt(r.fre) << " | " << fmt(r.compression) << " | " << fmt(r.sentence_splits) << " | "
     << fmt(r.copies) << " |\n";
  return os.str();
}

void write_report(const MetricReport& r, const std::filesystem::path& base) {
  namespace fs = std::filesystem;
  fs::path stem = base;
  if (stem.extension() == ".csv" || stem.extension() == ".md") stem.replace_extension();
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());

  {
    std::ofstream csv(stem.string() + ".csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write report: " + stem.string() + ".csv");
    csv << "system,dataset,bleu,sari,semantic_f1,fre,compression,sentence_splits,copies\n";
    csv << r.system_name << ',' << r.dataset_name << ',' << fmt(r.bleu) << ',' << fmt(r.sari) << ','
        << (r.semantic_f1 ? fmt(*r.semantic_f1) : std::string()) << ',' << fmt(r.fre) << ','
        << fmt(r.compression) << ',' << fmt(r.sentence_splits) << ',' << fmt(r.copies) << '\n';
  }
  {
    std::ofstream csv(stem.string() + ".per_sample.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write report: " + stem.string() + ".per_sample.csv");
    csv << "id,fre,compression,sentence_splits,copy,semantic\n";
    for (const auto& row : r.per_sample) {
      csv << row.id << ',' << fmt(row.fre) << ',' << fmt(row.compression) << ','
          << fmt(row.sentence_splits) << ',' << (row.copy ? 1 : 0) << ','
          << (row.semantic ? fmt(*row.semantic) : std::string()) << '\n';
    }
  }
  {
    std::ofstream md(stem.string() + ".md", std::ios::binary | std::ios::trunc);
    if (!md) throw IoError("cannot write report: " + stem.string() + ".md");
    md << report_markdown(r);
  }
}

}  // namespace paraforge::metrics
