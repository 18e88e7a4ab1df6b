#include "paraforge/corpus.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_set>

#include "paraforge/errors.hpp"
#include "paraforge/jsonl.hpp"
#include "paraforge/text.hpp"

namespace paraforge {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

long whitespace_word_count(const std::string& s) {
  return static_cast<long>(text::split_whitespace(s).size());
}

Sample parse_sample(const ordered_json& rec, SplitSchema schema, std::size_t line) {
  Sample s;
  if (!rec.contains("id") || !rec["id"].is_string()) {
    throw ValidationError("missing required field 'id'" + at_line(line));
  }
  s.id = rec["id"].get<std::string>();
  if (!rec.contains("original") || !rec["original"].is_string()) {
    throw ValidationError("sample '" + s.id + "': missing required field 'original'" + at_line(line));
  }
  s.original = rec["original"].get<std::string>();

  if (rec.contains("paraphrases")) {
    const auto& para = rec["paraphrases"];
    if (!para.is_object()) {
      throw ValidationError("sample '" + s.id + "': 'paraphrases' must be an object" + at_line(line));
    }
    for (auto it = para.begin(); it != para.end(); ++it) {
      const std::string& key = it.key();
      if (!it.value().is_string()) {
        throw ValidationError("sample '" + s.id + "': paraphrase '" + key + "' must be a string" +
                              at_line(line));
      }
      if (key == "ls") {
        s.ls_paraphrase = it.value().get<std::string>();
        continue;
      }
      if (key.size() != 1 || key[0] < '1' || key[0] > '5') {
        throw ValidationError("sample '" + s.id + "': paraphrase level key '" + key +
                              "' outside \"1\"..\"5\"" + at_line(line));
      }
      s.paraphrases.emplace(ComplexityLevel(key[0] - '0'), it.value().get<std::string>());
    }
  }

  if (!rec.contains("source_meta") || !rec["source_meta"].is_object()) {
    throw ValidationError("sample '" + s.id + "': missing required field 'source_meta'" + at_line(line));
  }
  const auto& meta = rec["source_meta"];
  try {
    s.source_meta.page_title = meta.at("page_title").get<std::string>();
    s.source_meta.popularity_rank = meta.at("popularity_rank").get<long>();
    s.source_meta.word_count = meta.at("word_count").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sample '" + s.id + "': bad source_meta: " + e.what() + at_line(line));
  }

  if (s.source_meta.word_count != whitespace_word_count(s.original)) {
    throw ValidationError("sample '" + s.id + "': word_count " +
                          std::to_string(s.source_meta.word_count) +
                          " does not match whitespace token count " +
                          std::to_string(whitespace_word_count(s.original)) + at_line(line));
  }

  const bool needs_levels = schema == SplitSchema::main || schema == SplitSchema::corrected;
  if (needs_levels) {
    for (int lvl = 1; lvl <= 5; ++lvl) {
      auto it = s.paraphrases.find(ComplexityLevel(lvl));
      if (it == s.paraphrases.end()) {
        throw ValidationError("sample '" + s.id + "': missing paraphrase level " +
                              std::to_string(lvl) + at_line(line));
      }
      if (it->second.empty()) {
        throw ValidationError("sample '" + s.id + "': empty paraphrase for level " +
                              std::to_string(lvl) + at_line(line));
      }
    }
  }
  if (schema == SplitSchema::main && s.ls_paraphrase) {
    throw ValidationError("sample '" + s.id + "': unexpected 'ls' paraphrase in main split" +
                          at_line(line));
  }
  if (schema == SplitSchema::corrected && !s.ls_paraphrase) {
    throw ValidationError("sample '" + s.id + "': corrected split requires 'ls' paraphrase" +
                          at_line(line));
  }
  if (schema == SplitSchema::source && (!s.paraphrases.empty() || s.ls_paraphrase)) {
    throw ValidationError("sample '" + s.id + "': source split must not carry paraphrases" +
                          at_line(line));
  }
  return s;
}

EditAnnotation parse_annotation(const ordered_json& rec, std::size_t line) {
  EditAnnotation a;
  try {
    a.sample_id = rec.at("sample_id").get<std::string>();
    a.level = ComplexityLevel(rec.at("level").get<int>());
    a.original = rec.at("original").get<std::string>();
    a.model_output = rec.at("model_output").get<std::string>();
    a.corrected_output = rec.at("corrected_output").get<std::string>();
    const auto& ops = rec.at("ops");
    a.ops.removed_info = ops.at("removed_info").get<bool>();
    a.ops.added_info = ops.at("added_info").get<bool>();
    a.ops.corrected_info = ops.at("corrected_info").get<bool>();
    a.ops.adjusted_complexity = ops.at("adjusted_complexity").get<bool>();
    a.ops.corrected_language = ops.at("corrected_language").get<bool>();
    a.ops.hallucination_in_origin = ops.at("hallucination_in_origin").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("missing required field: ") + e.what() + at_line(line));
  }
  if (!a.ops.any() && text::normalize_whitespace(a.model_output) !=
                          text::normalize_whitespace(a.corrected_output)) {
    throw ValidationError("annotation '" + a.sample_id +
                          "': no ops flagged but outputs differ beyond whitespace" + at_line(line));
  }
  return a;
}

void check_schema_version(const ordered_json& rec, SplitSchema schema, std::size_t line) {
  if (schema == SplitSchema::lenient && !rec.contains("schema_version")) return;
  if (!rec.contains("schema_version") || !rec["schema_version"].is_number_integer() ||
      rec["schema_version"].get<int>() != kSchemaVersion) {
    throw ValidationError("expected schema_version " + std::to_string(kSchemaVersion) + at_line(line));
  }
}

ordered_json sample_to_json(const Sample& s) {
  ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["id"] = s.id;
  rec["original"] = s.original;
  ordered_json para = ordered_json::object();
  for (const auto& [level, txt] : s.paraphrases) {
    para[std::to_string(level.value())] = txt;
  }
  if (s.ls_paraphrase) para["ls"] = *s.ls_paraphrase;
  rec["paraphrases"] = std::move(para);
  ordered_json meta;
  meta["page_title"] = s.source_meta.page_title;
  meta["popularity_rank"] = s.source_meta.popularity_rank;
  meta["word_count"] = s.source_meta.word_count;
  rec["source_meta"] = std::move(meta);
  return rec;
}

ordered_json annotation_to_json(const EditAnnotation& a) {
  ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["sample_id"] = a.sample_id;
  rec["level"] = a.level.value();
  rec["original"] = a.original;
  rec["model_output"] = a.model_output;
  rec["corrected_output"] = a.corrected_output;
  ordered_json ops;
  ops["removed_info"] = a.ops.removed_info;
  ops["added_info"] = a.ops.added_info;
  ops["corrected_info"] = a.ops.corrected_info;
  ops["adjusted_complexity"] = a.ops.adjusted_complexity;
  ops["corrected_language"] = a.ops.corrected_language;
  ops["hallucination_in_origin"] = a.ops.hallucination_in_origin;
  rec["ops"] = std::move(ops);
  return rec;
}

}  // namespace

bool Sample::is_complete() const {
  for (int lvl = 1; lvl <= 5; ++lvl) {
    auto it = paraphrases.find(ComplexityLevel(lvl));
    if (it == paraphrases.end() || it->second.empty()) return false;
  }
  return true;
}

std::size_t DatasetSplit::size() const {
  return holds_samples() ? samples().size() : annotations().size();
}

DatasetSplit load_split(const std::filesystem::path& path, SplitSchema schema) {
  auto lines = jsonl::read_lines(path);
  DatasetSplit split;
  split.name = path.stem().string();

  if (schema == SplitSchema::annotated) {
    std::vector<EditAnnotation> annotations;
    std::set<std::pair<std::string, int>> seen;
    for (const auto& line : lines) {
      ordered_json rec;
      try {
        rec = ordered_json::parse(line.text);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("malformed JSON" + at_line(line.number) + ": " + e.what());
      }
      check_schema_version(rec, schema, line.number);
      auto a = parse_annotation(rec, line.number);
      if (!seen.insert({a.sample_id, a.level.value()}).second) {
        throw ValidationError("duplicate annotation for ('" + a.sample_id + "', level " +
                              std::to_string(a.level.value()) + ")" + at_line(line.number));
      }
      annotations.push_back(std::move(a));
    }
    split.records = std::move(annotations);
    return split;
  }

  std::vector<Sample> samples;
  std::unordered_set<std::string> seen_ids;
  for (const auto& line : lines) {
    ordered_json rec;
    try {
      rec = ordered_json::parse(line.text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("malformed JSON" + at_line(line.number) + ": " + e.what());
    }
    check_schema_version(rec, schema, line.number);
    auto s = parse_sample(rec, schema, line.number);
    if (!seen_ids.insert(s.id).second) {
      throw ValidationError("duplicate id '" + s.id + "'" + at_line(line.number));
    }
    samples.push_back(std::move(s));
  }
  split.records = std::move(samples);
  return split;
}

void save_split(const DatasetSplit& split, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  if (split.holds_samples()) {
    lines.reserve(split.samples().size());
    for (const auto& s : split.samples()) lines.push_back(sample_to_json(s).dump());
  } else {
    lines.reserve(split.annotations().size());
    for (const auto& a : split.annotations()) lines.push_back(annotation_to_json(a).dump());
  }
  jsonl::write_lines(path, lines);
}

std::vector<std::string> split_ids(const DatasetSplit& split) {
  std::vector<std::string> ids;
  if (split.holds_samples()) {
    for (const auto& s : split.samples()) ids.push_back(s.id);
  } else {
    for (const auto& a : split.annotations()) ids.push_back(a.sample_id);
  }
  return ids;
}

void validate_disjoint(const DatasetSplit& a, const DatasetSplit& b) {
  auto ids_a = split_ids(a);
  std::unordered_set<std::string> set_a(ids_a.begin(), ids_a.end());
  std::vector<std::string> overlap;
  for (const auto& id : split_ids(b)) {
    if (set_a.count(id)) overlap.push_back(id);
  }
  if (!overlap.empty()) {
    std::string msg = "splits '" + a.name + "' and '" + b.name + "' share ids:";
    for (std::size_t i = 0; i < overlap.size() && i < 10; ++i) msg += " " + overlap[i];
    if (overlap.size() > 10) msg += " ...";
    throw ValidationError(msg);
  }
}

std::string to_string(Q1Content v) {
  switch (v) {
    case Q1Content::incorrectly: return "incorrectly";
    case Q1Content::approximately: return "approximately";
    case Q1Content::correctly: return "correctly";
  }
  return "?";
}

std::string to_string(Frequency v) {
  switch (v) {
    case Frequency::never: return "never";
    case Frequency::seldom: return "seldom";
    case Frequency::sometimes: return "sometimes";
    case Frequency::often: return "often";
  }
  return "?";
}

std::string to_string(AdditionType v) {
  switch (v) {
    case AdditionType::embellishment: return "embellishment";
    case AdditionType::explanations_definitions: return "explanations_definitions";
    case AdditionType::factually_incorrect: return "factually_incorrect";
    case AdditionType::factually_correct: return "factually_correct";
    case AdditionType::other: return "other";
    case AdditionType::nan_marker: return "nan";
  }
  return "?";
}

std::string to_string(Q5Complexity v) {
  switch (v) {
    case Q5Complexity::too_easy: return "too_easy";
    case Q5Complexity::a_bit_too_easy: return "a_bit_too_easy";
    case Q5Complexity::appropriate: return "appropriate";
    case Q5Complexity::a_bit_too_complicated: return "a_bit_too_complicated";
    case Q5Complexity::too_complicated: return "too_complicated";
  }
  return "?";
}

}  // namespace paraforge
