#include "paraforge/judge.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "internal/batch.hpp"
#include "internal/json_extract.hpp"
#include "paraforge/errors.hpp"
#include "paraforge/jsonl.hpp"

namespace paraforge {

namespace {

// Judge wire vocabulary (the verdict schema the model is asked to emit).
const std::map<std::string, Q1Content> kContentMap = {
    {"incorrectly", Q1Content::incorrectly},
    {"approximately", Q1Content::approximately},
    {"correctly", Q1Content::correctly},
};
const std::map<std::string, Frequency> kFrequencyMap = {
    {"never", Frequency::never},
    {"seldom", Frequency::seldom},
    {"sometimes", Frequency::sometimes},
    {"often", Frequency::often},
};
const std::map<std::string, AdditionType> kAdditionMap = {
    {"embellishment", AdditionType::embellishment},
    {"explanations/definitions", AdditionType::explanations_definitions},
    {"factually_incorrect_information", AdditionType::factually_incorrect},
    {"factually_correct_information", AdditionType::factually_correct},
    {"other", AdditionType::other},
    {"NaN", AdditionType::nan_marker},
};
const std::map<std::string, Q5Complexity> kComplexityMap = {
    {"too_easy", Q5Complexity::too_easy},
    {"a_bit_too_easy", Q5Complexity::a_bit_too_easy},
    {"appropriate", Q5Complexity::appropriate},
    {"a_bit_too_complicated", Q5Complexity::a_bit_too_complicated},
    {"too_complicated", Q5Complexity::too_complicated},
};

std::string wire_addition(AdditionType t) {
  for (const auto& [wire, value] : kAdditionMap) {
    if (value == t) return wire;
  }
  return "?";
}

const char* kVerdictSchemaText =
    "{\n"
    "    \"content_preservation\": \"incorrectly\"|\"approximately\"|\"correctly\",\n"
    "    \"information_loss\": \"never\"|\"seldom\"|\"sometimes\"|\"often\",\n"
    "    \"information_addition\": \"never\"|\"seldom\"|\"sometimes\"|\"often\",\n"
    "    \"type_of_addition\": list[\n"
    "        \"embellishment\"|\"explanations/definitions\"|\n"
    "        \"factually_incorrect_information\"|\"factually_correct_information\"|\n"
    "        \"other\"|\"NaN\"\n"
    "    ],\n"
    "    \"complexity_level\": \"too_easy\"|\"a_bit_too_easy\"|\"appropriate\"|\n"
    "    \"a_bit_too_complicated\"|\"too_complicated\"\n"
    "}";

std::string render_catalog(const LevelCatalog& catalog, bool german) {
  LevelCatalog sorted = catalog;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.level < b.level; });
  std::ostringstream os;
  for (const auto& level : sorted) {
    if (german) {
      os << "Stufe " << level.level.value() << " - " << level.name << "\n";
      os << "Zielgruppe: " << level.target_group << "\n";
      os << "Merkmale: " << level.characteristics << "\n";
      os << "Einsatzbereiche: " << level.example_areas << "\n\n";
    } else {
      os << "Level " << level.level.value() << " - " << level.name << "\n";
      os << "Target group: " << level.target_group << "\n";
      os << "Characteristics: " << level.characteristics << "\n";
      os << "Example areas: " << level.example_areas << "\n\n";
    }
  }
  return os.str();
}

}  // namespace

JudgePrompt build_judge_prompt(const std::string& original, const std::string& paraphrase,
                               ComplexityLevel level, const LevelCatalog& catalog,
                               const JudgePromptOptions& options) {
  validate_level_catalog(catalog);
  if (options.language != "de" && options.language != "en") {
    throw ValidationError("judge prompt language must be 'de' or 'en'");
  }
  const bool german = options.language == "de";

  std::ostringstream sys;
  if (german) {
    sys << "Du erhältst einen Originaltext und eine paraphrasierte Version.\n\n";
    sys << "Die Paraphrasen können in 5 verschiedenen Schwierigkeitsstufen vorliegen. Wir "
           "definieren diese Stufen wie folgt:\n\n";
    sys << render_catalog(catalog, true);
    sys << "Deine Aufgabe ist es, die Paraphrasierung unter folgenden Aspekten zu bewerten:\n\n";
    sys << "- content_preservation: Wie gut entspricht der Inhalt der Paraphrase dem "
           "Originaltext? Achte besonders darauf, ob die Bedeutung verändert oder so vereinfacht "
           "wurde, dass Nuancen verloren gehen oder neue Deutungen entstehen.\n";
    sys << "- information_loss: Fehlen in der Paraphrase Informationen, die im Original "
           "vorkommen?\n";
    sys << "- information_addition: Enthält die Paraphrase zusätzliche Informationen, die nicht "
           "im Original vorkommen? Dazu zählen auch erklärende Umschreibungen oder Beispiele, die "
           "neue Bedeutungselemente einführen.\n";
    sys << "- type_of_addition: Wenn du die vorherige Frage mit 'never' beantwortet hast, "
           "antworte hier mit 'NaN'. Gib andernfalls an, um welche Art von Zusatzinformation es "
           "sich handelt: z.B. Erklärungen, Ausschmückungen oder korrekte bzw. inkorrekte "
           "Fakten.\n";
    sys << "- complexity_level: Wie gut entspricht die Paraphrase der angegebenen "
           "Komplexitätsstufe? Achte auf die sprachlichen Merkmale der jeweiligen Stufe, nicht "
           "nur auf den Inhalt.\n\n";
    sys << "**WICHTIG:**\n";
    sys << "- Wenn abstrakte Begriffe durch einfache Umschreibungen ersetzt werden, gilt das als "
           "zusätzliche Erklärung.\n";
    sys << "- Wenn die Paraphrase eine inhaltliche Verschiebung erzeugt, kann das *sachlich "
           "falsche Information* darstellen.\n";
    sys << "- Die Bewertung muss ausschließlich im folgenden JSON-Format erfolgen und diesem "
           "Schema entsprechen:\n";
    sys << kVerdictSchemaText << "\n\n";
    sys << "Gib **nur** das JSON-Objekt zurück -- ohne weiteren Text.\n";
  } else {
    sys << "You will receive an original text and a paraphrased version.\n\n";
    sys << "The paraphrases can be available in 5 different levels of difficulty. We define "
           "these levels as follows:\n\n";
    sys << render_catalog(catalog, false);
    sys << "Your task is to evaluate the paraphrasing under the following aspects:\n\n";
    sys << "- content_preservation: How well does the content of the paraphrase match the "
           "original text? Pay particular attention to whether the meaning has been changed or "
           "simplified so that nuances are lost or new interpretations are created.\n";
    sys << "- information_loss: Is information missing from the paraphrase that appears in the "
           "original?\n";
    sys << "- information_addition: Does the paraphrase contain additional information that does "
           "not appear in the original? This includes explanatory paraphrases or examples that "
           "introduce new elements of meaning.\n";
    sys << "- type_of_addition: If you answered 'never' to the previous question, answer 'NaN' "
           "here. Otherwise indicate what type of additional information is included: e.g. "
           "explanations, embellishments, or correct or incorrect facts.\n";
    sys << "- complexity_level: How well does the paraphrase match the given level of "
           "complexity? Pay attention to the linguistic features of the respective level, not "
           "just the content.\n\n";
    sys << "**IMPORTANT:**\n";
    sys << "- If abstract terms are replaced by simple paraphrases, this is considered an "
           "additional explanation.\n";
    sys << "- If the paraphrase creates a shift in content, this may constitute *factually "
           "incorrect information*.\n";
    sys << "- The assessment must be made exclusively in the following JSON format and must "
           "comply with this schema:\n";
    sys << kVerdictSchemaText << "\n\n";
    sys << "Return **only** the JSON object -- without any further text.\n";
  }

  std::ostringstream user;
  if (german) {
    user << "Bewerte diesen Text:\n";
    user << "Originaltext: " << original << "\n";
    user << "Paraphrasierter Text: " << paraphrase << "\n";
    user << "Komplexitätsstufe der Paraphrase: " << level.value() << "\n\n";
    user << "Achte besonders darauf, ob durch Vereinfachungen Bedeutung verloren geht oder "
            "verändert wird.\n";
  } else {
    user << "Evaluate this text:\n";
    user << "Original text: " << original << "\n";
    user << "Paraphrased text: " << paraphrase << "\n";
    user << "Complexity level of the paraphrase: " << level.value() << "\n\n";
    user << "Pay particular attention to whether the meaning is lost or changed by "
            "simplifications.\n";
  }
  return JudgePrompt{sys.str(), user.str()};
}

std::string to_string(VerdictParseReason reason) {
  switch (reason) {
    case VerdictParseReason::not_json: return "not_json";
    case VerdictParseReason::bad_enum: return "bad_enum";
    case VerdictParseReason::nan_inconsistent: return "nan_inconsistent";
    case VerdictParseReason::missing_field: return "missing_field";
  }
  return "?";
}

VerdictParseResult parse_verdict(const std::string& raw_text) {
  VerdictParseResult result;
  auto fail = [&](VerdictParseReason reason, std::string message) {
    result.failure = VerdictParseFailure{reason, std::move(message)};
    return result;
  };

  auto objects = detail::extract_json_objects(raw_text);
  if (objects.empty()) return fail(VerdictParseReason::not_json, "no JSON object found");
  if (objects.size() > 1) {
    return fail(VerdictParseReason::not_json,
                "found " + std::to_string(objects.size()) + " JSON objects");
  }
  auto doc = nlohmann::json::parse(objects.front());
  if (!doc.is_object()) return fail(VerdictParseReason::not_json, "top-level value is not an object");

  for (const char* field : {"content_preservation", "information_loss", "information_addition",
                            "type_of_addition", "complexity_level"}) {
    if (!doc.contains(field)) {
      return fail(VerdictParseReason::missing_field, std::string("missing '") + field + "'");
    }
  }
  if (!doc["content_preservation"].is_string() || !doc["information_loss"].is_string() ||
      !doc["information_addition"].is_string() || !doc["complexity_level"].is_string() ||
      !doc["type_of_addition"].is_array()) {
    return fail(VerdictParseReason::missing_field, "field with wrong JSON type");
  }

  JudgeVerdict verdict;
  {
    auto it = kContentMap.find(doc["content_preservation"].get<std::string>());
    if (it == kContentMap.end()) {
      return fail(VerdictParseReason::bad_enum,
                  "content_preservation '" + doc["content_preservation"].get<std::string>() + "'");
    }
    verdict.content_preservation = it->second;
  }
  {
    auto it = kFrequencyMap.find(doc["information_loss"].get<std::string>());
    if (it == kFrequencyMap.end()) {
      return fail(VerdictParseReason::bad_enum,
                  "information_loss '" + doc["information_loss"].get<std::string>() + "'");
    }
    verdict.information_loss = it->second;
  }
  {
    auto it = kFrequencyMap.find(doc["information_addition"].get<std::string>());
    if (it == kFrequencyMap.end()) {
      return fail(VerdictParseReason::bad_enum,
                  "information_addition '" + doc["information_addition"].get<std::string>() + "'");
    }
    verdict.information_addition = it->second;
  }
  {
    auto it = kComplexityMap.find(doc["complexity_level"].get<std::string>());
    if (it == kComplexityMap.end()) {
      return fail(VerdictParseReason::bad_enum,
                  "complexity_level '" + doc["complexity_level"].get<std::string>() + "'");
    }
    verdict.complexity_level = it->second;
  }
  verdict.type_of_addition.clear();
  for (const auto& item : doc["type_of_addition"]) {
    if (!item.is_string()) return fail(VerdictParseReason::missing_field, "non-string addition type");
    auto it = kAdditionMap.find(item.get<std::string>());
    if (it == kAdditionMap.end()) {
      return fail(VerdictParseReason::bad_enum, "type_of_addition '" + item.get<std::string>() + "'");
    }
    verdict.type_of_addition.insert(it->second);
  }

  // The prompt-understanding sanity check: NaN exactly when no addition.
  bool never = verdict.information_addition == Frequency::never;
  bool only_nan = verdict.type_of_addition.size() == 1 &&
                  verdict.type_of_addition.count(AdditionType::nan_marker) == 1;
  if (never != only_nan || verdict.type_of_addition.empty() ||
      (!never && verdict.type_of_addition.count(AdditionType::nan_marker))) {
    return fail(VerdictParseReason::nan_inconsistent,
                "type_of_addition must be exactly ['NaN'] iff information_addition is 'never'");
  }

  result.verdict = std::move(verdict);
  return result;
}

JudgeBatchResult judge_batch(const std::vector<Sample>& samples, const LevelCatalog& catalog,
                             GenerationBackend& backend, GenerationCache& cache,
                             const BackendParams& params, const JudgeBatchOptions& options) {
  validate_level_catalog(catalog);

  struct Task {
    const Sample* sample;
    ComplexityLevel level{1};
  };
  std::vector<Task> tasks;
  for (const auto& sample : samples) {
    for (const auto& [level, paraphrase] : sample.paraphrases) {
      if (level.value() >= 1 && level.value() <= 5) tasks.push_back(Task{&sample, level});
    }
  }

  struct Slot {
    std::optional<JudgeVerdict> verdict;
    std::optional<JudgeFailure> failure;
  };
  std::vector<Slot> slots(tasks.size());
  std::atomic<int> backend_calls{0};

  detail_batch::run_pool(options.batch.parallelism, tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::string& paraphrase = task.sample->paraphrases.at(task.level);
    auto prompt = build_judge_prompt(task.sample->original, paraphrase, task.level, catalog,
                                     options.prompt);
    std::string pair_id = task.sample->id + "#" + std::to_string(task.level.value());

    const int max_asks = options.reask_on_parse_failure ? 2 : 1;
    for (int ask = 0; ask < max_asks; ++ask) {
      std::string key =
          generation_cache_key(pair_id, prompt.system_text, prompt.user_text, params, ask);
      std::string raw;
      try {
        raw = detail_batch::generate_with_cache(backend, cache, key, prompt.system_text,
                                                prompt.user_text, params, options.batch,
                                                backend_calls);
      } catch (const BackendError& e) {
        slots[i].failure =
            JudgeFailure{task.sample->id, task.level.value(), "backend", e.what()};
        return;
      }
      auto parsed = parse_verdict(raw);
      if (parsed.ok()) {
        parsed.verdict->sample_id = task.sample->id;
        parsed.verdict->level = task.level;
        slots[i].verdict = std::move(parsed.verdict);
        return;
      }
      if (ask + 1 == max_asks) {
        slots[i].failure = JudgeFailure{task.sample->id, task.level.value(),
                                        "parse:" + to_string(parsed.failure->reason),
                                        parsed.failure->message};
      }
    }
  });

  JudgeBatchResult result;
  for (auto& slot : slots) {
    if (slot.verdict) result.verdicts.push_back(std::move(*slot.verdict));
    if (slot.failure) result.failures.push_back(std::move(*slot.failure));
  }
  result.backend_calls = backend_calls.load();
  return result;
}

std::string to_string(JudgeRule rule) {
  switch (rule) {
    case JudgeRule::R1: return "R1";
    case JudgeRule::R2: return "R2";
    case JudgeRule::R3: return "R3";
    case JudgeRule::R4: return "R4";
    case JudgeRule::R5: return "R5";
  }
  return "?";
}

JudgeFilterResult apply_judge_filters(const DatasetSplit& split,
                                      const std::vector<JudgeVerdict>& verdicts) {
  std::unordered_map<std::string, std::map<int, const JudgeVerdict*>> by_sample;
  for (const auto& verdict : verdicts) {
    by_sample[verdict.sample_id][verdict.level.value()] = &verdict;
  }

  JudgeFilterResult result;
  result.kept.name = split.name;
  result.kept.records = std::vector<Sample>{};

  for (const auto& sample : split.samples()) {
    auto it = by_sample.find(sample.id);
    if (it == by_sample.end() || it->second.size() != 5) {
      throw ValidationError("sample '" + sample.id + "' has " +
                            std::to_string(it == by_sample.end() ? 0 : it->second.size()) +
                            " verdicts, expected 5");
    }
    std::vector<RuleTrigger> triggers;
    for (const auto& [level, verdict] : it->second) {
      if (verdict->content_preservation == Q1Content::incorrectly) {
        triggers.push_back({level, JudgeRule::R1});
      }
      if (verdict->complexity_level == Q5Complexity::too_easy && level != 1) {
        triggers.push_back({level, JudgeRule::R2});
      }
      if (verdict->complexity_level == Q5Complexity::too_complicated && level != 5) {
        triggers.push_back({level, JudgeRule::R3});
      }
      if (verdict->type_of_addition.count(AdditionType::factually_incorrect) ||
          verdict->type_of_addition.count(AdditionType::other) ||
          (verdict->type_of_addition.count(AdditionType::factually_correct) && level != 5)) {
        triggers.push_back({level, JudgeRule::R4});
      }
      if (verdict->information_loss == Frequency::often && level == 5) {
        triggers.push_back({level, JudgeRule::R5});
      }
    }
    if (triggers.empty()) {
      result.kept.samples().push_back(sample);
    } else {
      RemovedSample removed;
      removed.sample_id = sample.id;
      removed.triggers = triggers;
      for (const auto& trigger : triggers) removed.rules.push_back(trigger.rule);
      std::sort(removed.rules.begin(), removed.rules.end());
      removed.rules.erase(std::unique(removed.rules.begin(), removed.rules.end()),
                          removed.rules.end());
      result.removed.push_back(std::move(removed));
    }
  }
  return result;
}

std::vector<OrdinalEncoding> default_ordinal_encodings() {
  return {
      {"content_preservation", {{"incorrectly", 0}, {"approximately", 1}, {"correctly", 2}}},
      {"information_loss", {{"never", 0}, {"seldom", 1}, {"sometimes", 2}, {"often", 3}}},
      {"information_addition", {{"never", 0}, {"seldom", 1}, {"sometimes", 2}, {"often", 3}}},
      {"needs_adjustment",
       {{"too_easy", 1},
        {"a_bit_too_easy", 0},
        {"appropriate", 0},
        {"a_bit_too_complicated", 0},
        {"too_complicated", 1}}},
  };
}

namespace {

std::string criterion_answer(const JudgeVerdict& verdict, const std::string& criterion) {
  if (criterion == "content_preservation") return to_string(verdict.content_preservation);
  if (criterion == "information_loss") return to_string(verdict.information_loss);
  if (criterion == "information_addition") return to_string(verdict.information_addition);
  if (criterion == "needs_adjustment" || criterion == "complexity_level") {
    return to_string(verdict.complexity_level);
  }
  throw ValidationError("unknown verdict criterion '" + criterion + "'");
}

}  // namespace

EncodedVerdicts encode_verdicts(const std::vector<JudgeVerdict>& verdicts,
                                const std::vector<OrdinalEncoding>& encodings) {
  EncodedVerdicts out;
  for (const auto& encoding : encodings) out.columns.push_back(encoding.criterion);
  for (const auto& verdict : verdicts) {
    EncodedVerdicts::Row row;
    row.sample_id = verdict.sample_id;
    row.level = verdict.level.value();
    for (const auto& encoding : encodings) {
      std::string answer = criterion_answer(verdict, encoding.criterion);
      auto it = encoding.mapping.find(answer);
      if (it == encoding.mapping.end()) {
        throw ValidationError("value '" + answer + "' absent from encoding for '" +
                              encoding.criterion + "'");
      }
      row.values.push_back(it->second);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

CalibrationReport calibrate_judge(const std::vector<EditAnnotation>& annotations,
                                  const std::vector<JudgeVerdict>& verdicts) {
  std::map<std::pair<std::string, int>, const JudgeVerdict*> verdict_index;
  for (const auto& verdict : verdicts) {
    verdict_index[{verdict.sample_id, verdict.level.value()}] = &verdict;
  }

  struct Pair {
    const char* human_op;
    const char* judge_criterion;
    int expected_sign;
  };
  // Sign convention: a correction flag should coincide with a worse judge
  // answer; content_preservation is quality-ascending, hence negative.
  static const Pair kPairs[] = {
      {"corrected_info", "content_preservation", -1},
      {"removed_info", "information_addition", +1},
      {"hallucination_in_origin", "information_addition", +1},
      {"added_info", "information_loss", +1},
      {"adjusted_complexity", "needs_adjustment", +1},
  };

  auto encodings = default_ordinal_encodings();
  auto encoding_for = [&](const std::string& criterion) -> const OrdinalEncoding& {
    for (const auto& e : encodings) {
      if (e.criterion == criterion) return e;
    }
    throw ValidationError("no encoding for criterion '" + criterion + "'");
  };
  auto op_flag = [](const EditAnnotation& a, const std::string& op) -> bool {
    if (op == "removed_info") return a.ops.removed_info;
    if (op == "added_info") return a.ops.added_info;
    if (op == "corrected_info") return a.ops.corrected_info;
    if (op == "adjusted_complexity") return a.ops.adjusted_complexity;
    if (op == "corrected_language") return a.ops.corrected_language;
    if (op == "hallucination_in_origin") return a.ops.hallucination_in_origin;
    throw ValidationError("unknown edit op '" + op + "'");
  };

  CalibrationReport report;
  bool any_overlap = false;
  for (const auto& pair : kPairs) {
    std::vector<double> human;
    std::vector<double> judge;
    const auto& encoding = encoding_for(pair.judge_criterion);
    for (const auto& annotation : annotations) {
      auto it = verdict_index.find({annotation.sample_id, annotation.level.value()});
      if (it == verdict_index.end()) continue;
      std::string answer = criterion_answer(*it->second, pair.judge_criterion);
      human.push_back(op_flag(annotation, pair.human_op) ? 1.0 : 0.0);
      judge.push_back(static_cast<double>(encoding.mapping.at(answer)));
    }
    if (!human.empty()) any_overlap = true;

    CalibrationRow row;
    row.human_op = pair.human_op;
    row.judge_criterion = pair.judge_criterion;
    row.expected_sign = pair.expected_sign;
    row.n = human.size();
    if (human.size() >= 3) {
      auto result = analysis::spearman(human, judge);
      row.rho = result.rho;
      row.p = result.p;
      row.defined = result.defined;
      row.significant = result.defined && result.p <= 0.01;
    } else {
      row.defined = false;
    }
    report.rows.push_back(std::move(row));
  }
  if (!any_overlap) {
    throw ValidationError("calibrate_judge: no overlap between annotations and verdicts");
  }
  return report;
}

std::string calibration_report_csv(const CalibrationReport& report) {
  std::ostringstream os;
  os << "human_op,judge_criterion,rho,p,n,significant,expected_sign\n";
  for (const auto& row : report.rows) {
    os << row.human_op << ',' << row.judge_criterion << ',';
    if (row.defined) {
      os << row.rho << ',' << row.p;
    } else {
      os << "undefined,undefined";
    }
    os << ',' << row.n << ',' << (row.significant ? 1 : 0) << ',' << row.expected_sign << '\n';
  }
  return os.str();
}

std::string calibration_report_markdown(const CalibrationReport& report) {
  std::ostringstream os;
  os << "| Human operation | Judge criterion | rho | p | n | significant (p<=0.01) |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& row : report.rows) {
    os << "| " << row.human_op << " | " << row.judge_criterion << " | ";
    if (row.defined) {
      os << row.rho << " | " << row.p;
    } else {
      os << "undefined | undefined";
    }
    os << " | " << row.n << " | " << (row.significant ? "yes" : "no") << " |\n";
  }
  return os.str();
}

void save_verdicts(const std::vector<JudgeVerdict>& verdicts, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(verdicts.size());
  for (const auto& verdict : verdicts) {
    nlohmann::ordered_json rec;
    rec["schema_version"] = 1;
    rec["sample_id"] = verdict.sample_id;
    rec["level"] = verdict.level.value();
    rec["content_preservation"] = to_string(verdict.content_preservation);
    rec["information_loss"] = to_string(verdict.information_loss);
    rec["information_addition"] = to_string(verdict.information_addition);
    auto types = nlohmann::json::array();
    for (const auto& t : verdict.type_of_addition) types.push_back(wire_addition(t));
    rec["type_of_addition"] = std::move(types);
    rec["complexity_level"] = to_string(verdict.complexity_level);
    lines.push_back(rec.dump());
  }
  jsonl::write_lines(path, lines);
}

std::vector<JudgeVerdict> load_verdicts(const std::filesystem::path& path) {
  std::vector<JudgeVerdict> verdicts;
  for (const auto& line : jsonl::read_lines(path)) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("verdicts " + path.string() + " (line " + std::to_string(line.number) +
                            "): " + e.what());
    }
    // reuse the strict schema validation, then attach identity
    auto parsed = parse_verdict(line.text);
    if (!parsed.ok()) {
      throw ValidationError("verdicts " + path.string() + " (line " + std::to_string(line.number) +
                            "): " + to_string(parsed.failure->reason) + ": " +
                            parsed.failure->message);
    }
    try {
      parsed.verdict->sample_id = rec.at("sample_id").get<std::string>();
      parsed.verdict->level = ComplexityLevel(rec.at("level").get<int>());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("verdicts " + path.string() + " (line " + std::to_string(line.number) +
                            "): " + e.what());
    }
    verdicts.push_back(std::move(*parsed.verdict));
  }
  return verdicts;
}

std::vector<analysis::LevelRecord> verdict_level_records(const std::vector<JudgeVerdict>& verdicts) {
  std::vector<analysis::LevelRecord> records;
  for (const auto& verdict : verdicts) {
    records.push_back({verdict.level, "content_preservation", to_string(verdict.content_preservation)});
    records.push_back({verdict.level, "information_loss", to_string(verdict.information_loss)});
    records.push_back({verdict.level, "information_addition", to_string(verdict.information_addition)});
    for (const auto& t : verdict.type_of_addition) {
      records.push_back({verdict.level, "type_of_addition", to_string(t)});
    }
    records.push_back({verdict.level, "complexity_level", to_string(verdict.complexity_level)});
  }
  return records;
}

}  // namespace paraforge
