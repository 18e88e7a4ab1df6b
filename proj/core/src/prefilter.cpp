#include "paraforge/prefilter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "paraforge/errors.hpp"
#include "paraforge/jsonl.hpp"
#include "paraforge/metrics.hpp"
#include "paraforge/text.hpp"

namespace paraforge {

namespace {

using paraforge::text::decode_utf8;
using paraforge::text::encode_utf8;
using paraforge::text::is_digit;
using paraforge::text::is_punct;
using paraforge::text::to_lower;

std::string strip_and_lower(const std::string& token) {
  auto cps = decode_utf8(token);
  std::size_t lo = 0, hi = cps.size();
  while (lo < hi && is_punct(cps[lo])) ++lo;
  while (hi > lo && is_punct(cps[hi - 1])) --hi;
  std::vector<char32_t> core;
  core.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) core.push_back(to_lower(cps[i]));
  return encode_utf8(core);
}

bool all_digits(const std::string& s) {
  auto cps = decode_utf8(s);
  if (cps.empty()) return false;
  return std::all_of(cps.begin(), cps.end(), [](char32_t cp) { return is_digit(cp); });
}

}  // namespace

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary: " + path.string());
  Vocabulary vocab;
  vocab.source_name = path.filename().string();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    vocab.entries.insert(paraforge::text::lowercase(line));
  }
  if (vocab.entries.empty()) throw ValidationError("vocabulary is empty: " + path.string());
  return vocab;
}

std::vector<OovRun> find_oov_runs(const std::string& input, const Vocabulary& vocab, int min_run) {
  if (min_run < 1) throw ValidationError("min_run must be >= 1");
  auto raw_tokens = paraforge::text::split_whitespace(input);

  std::vector<OovRun> runs;
  OovRun current;
  bool in_run = false;
  auto close_run = [&](std::size_t) {
    if (in_run && current.length >= static_cast<std::size_t>(min_run)) runs.push_back(current);
    in_run = false;
    current = OovRun{};
  };

  for (std::size_t i = 0; i < raw_tokens.size(); ++i) {
    std::string form = strip_and_lower(raw_tokens[i]);
    bool oov = !form.empty() && !all_digits(form) && !vocab.entries.count(form);
    if (oov) {
      if (!in_run) {
        in_run = true;
        current.start_token_index = i;
      }
      ++current.length;
      current.tokens.push_back(form);
    } else {
      close_run(i);
    }
  }
  close_run(raw_tokens.size());
  return runs;
}

namespace {

// Character 1..3-gram counts over lowercased letter runs, space-padded
// per word (classic rank-profile language identification).
std::unordered_map<std::string, long> char_ngram_counts(const std::string& input) {
  std::unordered_map<std::string, long> counts;
  auto cps = decode_utf8(paraforge::text::lowercase(input));
  std::vector<std::vector<char32_t>> words;
  std::vector<char32_t> word;
  for (char32_t cp : cps) {
    if (paraforge::text::is_letter(cp)) {
      word.push_back(cp);
    } else if (!word.empty()) {
      words.push_back(word);
      word.clear();
    }
  }
  if (!word.empty()) words.push_back(word);

  for (const auto& w : words) {
    std::vector<char32_t> padded;
    padded.reserve(w.size() + 2);
    padded.push_back(U' ');
    padded.insert(padded.end(), w.begin(), w.end());
    padded.push_back(U' ');
    for (std::size_t n = 1; n <= 3; ++n) {
      if (padded.size() < n) continue;
      for (std::size_t i = 0; i + n <= padded.size(); ++i) {
        std::vector<char32_t> gram(padded.begin() + static_cast<std::ptrdiff_t>(i),
                                   padded.begin() + static_cast<std::ptrdiff_t>(i + n));
        if (std::all_of(gram.begin(), gram.end(), [](char32_t c) { return c == U' '; })) continue;
        counts[encode_utf8(gram)] += 1;
      }
    }
  }
  return counts;
}

std::vector<std::string> ranked_ngrams(const std::unordered_map<std::string, long>& counts,
                                       std::size_t profile_size) {
  std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // deterministic tie-break
  });
  std::vector<std::string> out;
  out.reserve(std::min(profile_size, items.size()));
  for (std::size_t i = 0; i < items.size() && i < profile_size; ++i) out.push_back(items[i].first);
  return out;
}

void index_ranks(LanguageProfile& profile) {
  profile.rank.clear();
  for (std::size_t i = 0; i < profile.ngrams_by_rank.size(); ++i) {
    profile.rank.emplace(profile.ngrams_by_rank[i], i);
  }
}

}  // namespace

LanguageProfile build_language_profile(const std::string& code, const std::string& training_text,
                                       std::size_t profile_size) {
  LanguageProfile profile;
  profile.code = code;
  profile.ngrams_by_rank = ranked_ngrams(char_ngram_counts(training_text), profile_size);
  if (profile.ngrams_by_rank.empty()) {
    throw ValidationError("no n-grams extracted for profile '" + code + "'");
  }
  index_ranks(profile);
  return profile;
}

void save_language_profile(const LanguageProfile& profile, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["code"] = profile.code;
  nlohmann::ordered_json grams = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < profile.ngrams_by_rank.size(); ++i) {
    grams[profile.ngrams_by_rank[i]] = i;
  }
  doc["ngrams"] = std::move(grams);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write profile: " + path.string());
  out << doc.dump(2) << '\n';
}

LanguageProfile load_language_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("profile " + path.string() + ": " + e.what());
  }
  LanguageProfile profile;
  try {
    profile.code = doc.at("code").get<std::string>();
    const auto& grams = doc.at("ngrams");
    profile.ngrams_by_rank.resize(grams.size());
    for (auto it = grams.begin(); it != grams.end(); ++it) {
      std::size_t rank = it.value().get<std::size_t>();
      if (rank >= profile.ngrams_by_rank.size()) {
        throw ValidationError("profile " + path.string() + ": rank out of range");
      }
      profile.ngrams_by_rank[rank] = it.key();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("profile " + path.string() + ": " + e.what());
  }
  index_ranks(profile);
  return profile;
}

std::vector<LanguageProfile> load_language_profiles(const std::filesystem::path& dir) {
  std::vector<LanguageProfile> profiles;
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("profile directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") profiles.push_back(load_language_profile(entry.path()));
  }
  std::sort(profiles.begin(), profiles.end(),
            [](const auto& a, const auto& b) { return a.code < b.code; });
  return profiles;
}

std::pair<std::string, double> detect_language(const std::string& input,
                                               const std::vector<LanguageProfile>& profiles) {
  for (const char* required : {"de", "en", "fr"}) {
    if (std::none_of(profiles.begin(), profiles.end(),
                     [&](const auto& p) { return p.code == required; })) {
      throw ValidationError(std::string("language profiles must include '") + required + "'");
    }
  }
  if (paraforge::text::codepoint_count(input) < 20) return {"und", 0.0};

  auto text_ranked = ranked_ngrams(char_ngram_counts(input), 400);
  if (text_ranked.empty()) return {"und", 0.0};

  std::string best_code = "und";
  double best_norm = 2.0;
  for (const auto& profile : profiles) {
    const double penalty = static_cast<double>(profile.ngrams_by_rank.size());
    double distance = 0.0;
    for (std::size_t r = 0; r < text_ranked.size(); ++r) {
      auto it = profile.rank.find(text_ranked[r]);
      if (it == profile.rank.end()) {
        distance += penalty;
      } else {
        distance += std::abs(static_cast<double>(r) - static_cast<double>(it->second));
      }
    }
    double norm = distance / (penalty * static_cast<double>(text_ranked.size()));
    if (norm < best_norm) {
      best_norm = norm;
      best_code = profile.code;
    }
  }
  double confidence = std::clamp(1.0 - best_norm, 0.0, 1.0);
  return {best_code, confidence};
}

std::string to_string(FilterRule rule) {
  switch (rule) {
    case FilterRule::invalid_json: return "invalid_json";
    case FilterRule::oov_run: return "oov_run";
    case FilterRule::foreign_language: return "foreign_language";
    case FilterRule::fre_nonmonotone_warning: return "fre_nonmonotone_warning";
  }
  return "?";
}

std::string to_string(Disposition d) {
  switch (d) {
    case Disposition::pending: return "pending";
    case Disposition::keep: return "keep";
    case Disposition::remove: return "remove";
  }
  return "?";
}

namespace {

FilterRule rule_from_string(const std::string& s) {
  if (s == "invalid_json") return FilterRule::invalid_json;
  if (s == "oov_run") return FilterRule::oov_run;
  if (s == "foreign_language") return FilterRule::foreign_language;
  if (s == "fre_nonmonotone_warning") return FilterRule::fre_nonmonotone_warning;
  throw ValidationError("unknown filter rule: " + s);
}

Disposition disposition_from_string(const std::string& s) {
  if (s == "pending") return Disposition::pending;
  if (s == "keep") return Disposition::keep;
  if (s == "remove") return Disposition::remove;
  throw ValidationError("unknown disposition: " + s);
}

}  // namespace

PrefilterResult apply_prefilters(const DatasetSplit& split, const Vocabulary& vocab,
                                 const std::vector<LanguageProfile>& profiles,
                                 const PrefilterOptions& options,
                                 const std::vector<PriorFailure>& synthesis_failures) {
  PrefilterResult result;
  result.clean.name = split.name;
  result.clean.records = std::vector<Sample>{};

  for (const auto& failure : synthesis_failures) {
    result.flags.push_back(FilterFlag{failure.sample_id, std::nullopt, FilterRule::invalid_json,
                                      failure.detail, Disposition::pending});
  }

  for (const auto& sample : split.samples()) {
    std::size_t flags_before = result.flags.size();

    std::map<int, double> fre_by_level;
    for (const auto& [level, paraphrase] : sample.paraphrases) {
      auto oov = find_oov_runs(paraphrase, vocab, options.oov_min_run);
      if (!oov.empty()) {
        std::ostringstream detail;
        detail << oov.size() << " run(s), first at token " << oov.front().start_token_index << ":";
        for (const auto& tok : oov.front().tokens) detail << ' ' << tok;
        result.flags.push_back(FilterFlag{sample.id, level, FilterRule::oov_run, detail.str(),
                                          Disposition::pending});
      }
      auto [lang, conf] = detect_language(paraphrase, profiles);
      if (lang != "de" && conf >= options.langid_min_conf) {
        result.flags.push_back(FilterFlag{sample.id, level, FilterRule::foreign_language,
                                          lang + " (confidence " + std::to_string(conf) + ")",
                                          Disposition::pending});
      }
      if (!paraforge::text::normalize_whitespace(paraphrase).empty()) {
        fre_by_level[level.value()] = metrics::fre_german(paraphrase);
      }
    }

    // Advisory ordering check: levels should read progressively harder.
    int inversions = 0;
    for (int lvl = 1; lvl < 5; ++lvl) {
      auto a = fre_by_level.find(lvl);
      auto b = fre_by_level.find(lvl + 1);
      if (a != fre_by_level.end() && b != fre_by_level.end() && a->second < b->second) ++inversions;
    }
    if (inversions >= 2) {
      std::ostringstream detail;
      detail << inversions << " adjacent-level FRE inversions:";
      for (const auto& [lvl, fre] : fre_by_level) detail << " L" << lvl << "=" << fre;
      result.flags.push_back(FilterFlag{sample.id, std::nullopt,
                                        FilterRule::fre_nonmonotone_warning, detail.str(),
                                        Disposition::pending});
    }

    bool blocked = false;
    for (std::size_t i = flags_before; i < result.flags.size(); ++i) {
      if (result.flags[i].blocking()) blocked = true;
    }
    if (!blocked) result.clean.samples().push_back(sample);
  }
  return result;
}

void save_flags(const std::vector<FilterFlag>& flags, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(flags.size());
  for (const auto& flag : flags) {
    nlohmann::ordered_json rec;
    rec["schema_version"] = 1;
    rec["sample_id"] = flag.sample_id;
    rec["level"] = flag.level ? nlohmann::json(flag.level->value()) : nlohmann::json(nullptr);
    rec["rule"] = to_string(flag.rule);
    rec["detail"] = flag.detail;
    rec["disposition"] = to_string(flag.disposition);
    lines.push_back(rec.dump());
  }
  jsonl::write_lines(path, lines);
}

std::vector<FilterFlag> load_flags(const std::filesystem::path& path) {
  std::vector<FilterFlag> flags;
  for (const auto& line : jsonl::read_lines(path)) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.text);
      FilterFlag flag;
      flag.sample_id = rec.at("sample_id").get<std::string>();
      if (!rec.at("level").is_null()) flag.level = ComplexityLevel(rec.at("level").get<int>());
      flag.rule = rule_from_string(rec.at("rule").get<std::string>());
      flag.detail = rec.at("detail").get<std::string>();
      flag.disposition = disposition_from_string(rec.at("disposition").get<std::string>());
      flags.push_back(std::move(flag));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("flags " + path.string() + " (line " + std::to_string(line.number) +
                            "): " + e.what());
    }
  }
  return flags;
}

std::vector<ReviewDecision> load_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open decisions: " + path.string());
  std::vector<ReviewDecision> decisions;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("decisions " + path.string() + " (line " + std::to_string(number) +
                            "): expected 'index,keep|remove'");
    }
    ReviewDecision d;
    try {
      d.flag_index = std::stoul(line.substr(0, comma));
    } catch (const std::exception&) {
      throw ValidationError("decisions " + path.string() + " (line " + std::to_string(number) +
                            "): bad index");
    }
    std::string verb = line.substr(comma + 1);
    if (verb == "keep") {
      d.decision = Disposition::keep;
    } else if (verb == "remove") {
      d.decision = Disposition::remove;
    } else {
      throw ValidationError("decisions " + path.string() + " (line " + std::to_string(number) +
                            "): decision must be keep or remove");
    }
    decisions.push_back(d);
  }
  return decisions;
}

void resolve_review(std::vector<FilterFlag>& flags, const std::vector<ReviewDecision>& decisions) {
  for (const auto& decision : decisions) {
    if (decision.flag_index >= flags.size()) {
      throw ValidationError("decision references unknown flag index " +
                            std::to_string(decision.flag_index));
    }
    auto& flag = flags[decision.flag_index];
    if (flag.disposition != Disposition::pending) {
      throw ValidationError("flag " + std::to_string(decision.flag_index) +
                            " already resolved to " + to_string(flag.disposition));
    }
    flag.disposition = decision.decision;
  }
}

DatasetSplit apply_review(const DatasetSplit& original, const std::vector<FilterFlag>& flags) {
  // keep a sample unless it has a blocking flag that is pending or removed
  std::unordered_map<std::string, bool> excluded;  // id -> any blocking flag not kept
  for (const auto& flag : flags) {
    if (!flag.blocking()) continue;
    bool kept = flag.disposition == Disposition::keep;
    auto [it, inserted] = excluded.emplace(flag.sample_id, !kept);
    if (!inserted && !kept) it->second = true;
  }
  DatasetSplit out;
  out.name = original.name;
  out.records = std::vector<Sample>{};
  for (const auto& sample : original.samples()) {
    auto it = excluded.find(sample.id);
    if (it == excluded.end() || !it->second) out.samples().push_back(sample);
  }
  return out;
}

}  // namespace paraforge
