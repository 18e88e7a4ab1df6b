// paraforge: build, filter, judge and evaluate readability-controlled
// paraphrase corpora. One subcommand per pipeline stage; every stage
// writes a run manifest beside its outputs.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>

#ifdef _WIN32
#include <io.h>
#else
#include <unistd.h>
#endif

#include "paraforge/analysis.hpp"
#include "paraforge/backend.hpp"
#include "paraforge/cache.hpp"
#include "paraforge/config.hpp"
#include "paraforge/corpus.hpp"
#include "paraforge/errors.hpp"
#include "paraforge/ingest.hpp"
#include "paraforge/jsonl.hpp"
#include "paraforge/judge.hpp"
#include "paraforge/manifest.hpp"
#include "paraforge/metrics.hpp"
#include "paraforge/prefilter.hpp"
#include "paraforge/synthesis.hpp"

#ifndef PARAFORGE_VERSION
#define PARAFORGE_VERSION "0.0.0"
#endif

namespace {

namespace fs = std::filesystem;
using namespace paraforge;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPartialFailure = 2;

struct GlobalOptions {
  std::string config_path;
};

PipelineConfig effective_config(const GlobalOptions& global) {
  if (!global.config_path.empty()) return load_pipeline_config(global.config_path);
  return PipelineConfig{};
}

std::unique_ptr<GenerationBackend> make_backend(const BackendConfig& backend, bool judge) {
  if (backend.kind == "mock") {
    if (judge) return std::make_unique<MockJudgeBackend>();
    return std::make_unique<MockSynthesisBackend>();
  }
  return std::make_unique<HttpChatBackend>(backend.url);
}

void write_stage_manifest(const std::string& command, const PipelineConfig& config,
                          const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                          const std::map<std::string, long>& counts) {
  RunManifest manifest;
  manifest.tool = "paraforge";
  manifest.tool_version = PARAFORGE_VERSION;
  manifest.command = command;
  manifest.config_hash = config_hash(config);
  for (const auto& input : inputs) manifest.inputs.push_back(hash_file_ref(input));
  for (const auto& output : outputs) manifest.outputs.push_back(hash_file_ref(output));
  manifest.counts = counts;
  write_run_manifest(manifest);
}

std::unordered_set<std::string> load_exclude_ids(const fs::path& path) {
  std::unordered_set<std::string> ids;
  for (const auto& line : jsonl::read_lines(path)) {
    try {
      auto rec = nlohmann::json::parse(line.text);
      if (rec.contains("id")) {
        ids.insert(rec["id"].get<std::string>());
      } else if (rec.contains("sample_id")) {
        ids.insert(rec["sample_id"].get<std::string>());
      } else {
        throw ValidationError("exclude file line " + std::to_string(line.number) +
                              ": no id or sample_id field");
      }
    } catch (const nlohmann::json::exception&) {
      ids.insert(line.text);  // plain id-per-line fallback
    }
  }
  return ids;
}

std::vector<PriorFailure> load_synthesis_failures(const fs::path& path) {
  std::vector<PriorFailure> failures;
  for (const auto& line : jsonl::read_lines(path)) {
    try {
      auto rec = nlohmann::json::parse(line.text);
      failures.push_back(PriorFailure{rec.at("sample_id").get<std::string>(),
                                      rec.value("kind", "") + ": " + rec.value("message", "")});
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("failures file " + path.string() + " (line " +
                            std::to_string(line.number) + "): " + e.what());
    }
  }
  return failures;
}

void save_synthesis_failures(const std::vector<SynthesisFailure>& failures, const fs::path& path) {
  std::vector<std::string> lines;
  for (const auto& failure : failures) {
    nlohmann::ordered_json rec;
    rec["sample_id"] = failure.sample_id;
    rec["kind"] = failure.kind;
    rec["message"] = failure.message;
    lines.push_back(rec.dump());
  }
  jsonl::write_lines(path, lines);
}

void save_judge_failures(const std::vector<JudgeFailure>& failures, const fs::path& path) {
  std::vector<std::string> lines;
  for (const auto& failure : failures) {
    nlohmann::ordered_json rec;
    rec["sample_id"] = failure.sample_id;
    rec["level"] = failure.level;
    rec["kind"] = failure.kind;
    rec["message"] = failure.message;
    lines.push_back(rec.dump());
  }
  jsonl::write_lines(path, lines);
}

int cmd_ingest(const GlobalOptions& global, const std::string& dump, long top_n, long count,
               long max_words, std::uint64_t seed, bool seed_given, const std::string& exclude,
               bool assert_sorted, const std::string& out) {
  auto config = effective_config(global);
  auto records = load_paragraph_dump(dump);

  SamplingOptions options;
  options.top_n = top_n;
  options.count = static_cast<std::size_t>(count);
  options.max_words = max_words;
  options.seed = seed_given ? seed : config.seeds.sampling;
  options.assert_sorted = assert_sorted;

  std::unordered_set<std::string> exclude_ids;
  if (!exclude.empty()) exclude_ids = load_exclude_ids(exclude);

  auto samples = sample_paragraphs(records, options, exclude_ids);
  DatasetSplit split;
  split.name = fs::path(out).stem().string();
  split.records = samples;
  save_split(split, out);

  std::vector<fs::path> inputs = {dump};
  if (!exclude.empty()) inputs.push_back(exclude);
  write_stage_manifest("ingest", config, inputs, {out},
                       {{"dump_records", static_cast<long>(records.size())},
                        {"sampled", static_cast<long>(samples.size())},
                        {"excluded_ids", static_cast<long>(exclude_ids.size())},
                        {"seed", static_cast<long>(options.seed)}});
  std::cout << "ingest: sampled " << samples.size() << " of " << records.size() << " -> " << out
            << "\n";
  return kExitOk;
}

int cmd_synthesize(const GlobalOptions& global, const std::string& in, const std::string& out,
                   const std::string& backend_kind, int parallelism, const std::string& catalog_path,
                   const std::string& one_shot_path, const std::string& cache_dir) {
  auto config = effective_config(global);
  if (!backend_kind.empty()) config.backend.kind = backend_kind;
  if (parallelism > 0) config.backend.parallelism = parallelism;

  fs::path catalog_file = !catalog_path.empty() ? fs::path(catalog_path) : config.paths.level_catalog;
  fs::path one_shot_file = !one_shot_path.empty() ? fs::path(one_shot_path) : config.paths.one_shot;
  fs::path cache_path = !cache_dir.empty() ? fs::path(cache_dir) : config.paths.cache_dir;
  if (catalog_file.empty() || one_shot_file.empty() || cache_path.empty()) {
    throw ValidationError("synthesize needs a level catalog, a one-shot example and a cache dir "
                          "(via --config or flags)");
  }

  auto split = load_split(in, SplitSchema::source);
  auto spec = default_prompt_spec(load_level_catalog(catalog_file), load_one_shot(one_shot_file));
  auto backend = make_backend(config.backend, /*judge=*/false);
  GenerationCache cache(cache_path);

  BackendParams params;
  params.model_name = config.backend.model_name;
  params.temperature = config.backend.temperature;
  params.max_tokens = config.backend.max_tokens;
  BatchOptions options;
  options.parallelism = config.backend.parallelism;
  options.retries = config.backend.retries;

  auto result = synthesize_batch(split.samples(), spec, *backend, cache, params, options);

  DatasetSplit out_split;
  out_split.name = fs::path(out).stem().string();
  out_split.records = result.successes;
  save_split(out_split, out);
  fs::path failures_path = fs::path(out).string() + ".failures.jsonl";
  save_synthesis_failures(result.failures, failures_path);

  write_stage_manifest("synthesize", config, {in, catalog_file, one_shot_file},
                       {out, failures_path},
                       {{"input_samples", static_cast<long>(split.samples().size())},
                        {"successes", static_cast<long>(result.successes.size())},
                        {"failures", static_cast<long>(result.failures.size())},
                        {"backend_calls", result.backend_calls}});
  std::cout << "synthesize: " << result.successes.size() << " ok, " << result.failures.size()
            << " failed, " << result.backend_calls << " backend calls -> " << out << "\n";
  return result.failures.empty() ? kExitOk : kExitPartialFailure;
}

int cmd_filter(const GlobalOptions& global, const std::string& in, const std::string& out,
               const std::string& flags_out, const std::string& failures_in,
               const std::string& vocab_path, const std::string& profiles_path) {
  auto config = effective_config(global);
  fs::path vocab_file = !vocab_path.empty() ? fs::path(vocab_path) : config.paths.vocab;
  fs::path profiles_dir = !profiles_path.empty() ? fs::path(profiles_path) : config.paths.profiles;
  if (vocab_file.empty() || profiles_dir.empty()) {
    throw ValidationError("filter needs a vocabulary and a profiles dir (via --config or flags)");
  }

  auto split = load_split(in, SplitSchema::main);
  auto vocab = load_vocabulary(vocab_file);
  auto profiles = load_language_profiles(profiles_dir);

  PrefilterOptions options;
  options.oov_min_run = config.filter_thresholds.oov_min_run;
  options.langid_min_conf = config.filter_thresholds.langid_min_conf;

  std::vector<PriorFailure> prior;
  if (!failures_in.empty()) prior = load_synthesis_failures(failures_in);

  auto result = apply_prefilters(split, vocab, profiles, options, prior);
  save_split(result.clean, out);
  fs::path flags_path = !flags_out.empty() ? fs::path(flags_out) : fs::path(out.c_str()).string() + ".flags.jsonl";
  save_flags(result.flags, flags_path);

  long blocking = 0;
  for (const auto& flag : result.flags) {
    if (flag.blocking()) ++blocking;
  }
  std::vector<fs::path> inputs = {in, vocab_file};
  if (!failures_in.empty()) inputs.push_back(failures_in);
  write_stage_manifest("filter", config, inputs, {out, flags_path},
                       {{"input_samples", static_cast<long>(split.samples().size())},
                        {"clean", static_cast<long>(result.clean.samples().size())},
                        {"flags", static_cast<long>(result.flags.size())},
                        {"blocking_flags", blocking}});
  std::cout << "filter: " << result.clean.samples().size() << " clean, " << result.flags.size()
            << " flags (" << blocking << " blocking) -> " << out << "\n";
  return kExitOk;
}

int cmd_review(const GlobalOptions& global, const std::string& flags_in,
               const std::string& decisions_path, const std::string& out, const std::string& split_in,
               const std::string& clean_out) {
  auto config = effective_config(global);
  auto flags = load_flags(flags_in);

  if (!decisions_path.empty()) {
    resolve_review(flags, load_decisions(decisions_path));
  } else {
#ifdef _WIN32
    bool tty = _isatty(_fileno(stdin)) != 0;
#else
    bool tty = isatty(fileno(stdin)) != 0;
#endif
    if (!tty) throw ValidationError("review needs --decisions when stdin is not a terminal");
    for (std::size_t i = 0; i < flags.size(); ++i) {
      auto& flag = flags[i];
      if (flag.disposition != Disposition::pending) continue;
      std::cout << "[" << i << "] sample " << flag.sample_id
                << (flag.level ? " level " + std::to_string(flag.level->value()) : std::string())
                << " rule " << to_string(flag.rule) << "\n    " << flag.detail
                << "\n  (k)eep / (r)emove / (s)kip / (q)uit? " << std::flush;
      std::string answer;
      if (!std::getline(std::cin, answer)) break;
      if (answer == "k") {
        flag.disposition = Disposition::keep;
      } else if (answer == "r") {
        flag.disposition = Disposition::remove;
      } else if (answer == "q") {
        break;
      }
    }
  }

  save_flags(flags, out);
  std::vector<fs::path> inputs = {flags_in};
  if (!decisions_path.empty()) inputs.push_back(decisions_path);
  std::vector<fs::path> outputs = {out};

  long pending = 0, kept = 0, removed = 0;
  for (const auto& flag : flags) {
    switch (flag.disposition) {
      case Disposition::pending: ++pending; break;
      case Disposition::keep: ++kept; break;
      case Disposition::remove: ++removed; break;
    }
  }
  std::map<std::string, long> counts = {{"pending", pending}, {"keep", kept}, {"remove", removed}};

  if (!split_in.empty()) {
    if (clean_out.empty()) throw ValidationError("review --in requires --clean-out");
    auto original = load_split(split_in, SplitSchema::main);
    auto final_split = apply_review(original, flags);
    save_split(final_split, clean_out);
    inputs.push_back(split_in);
    outputs.push_back(clean_out);
    counts["final_samples"] = static_cast<long>(final_split.samples().size());
  }
  write_stage_manifest("review", config, inputs, outputs, counts);
  std::cout << "review: " << kept << " keep, " << removed << " remove, " << pending
            << " pending -> " << out << "\n";
  return kExitOk;
}

int cmd_judge(const GlobalOptions& global, const std::string& in, const std::string& out,
              const std::string& backend_kind, int parallelism, const std::string& catalog_path,
              const std::string& cache_dir, const std::string& language) {
  auto config = effective_config(global);
  if (!backend_kind.empty()) config.backend.kind = backend_kind;
  if (parallelism > 0) config.backend.parallelism = parallelism;
  if (!language.empty()) config.judge.prompt_language = language;

  fs::path catalog_file = !catalog_path.empty() ? fs::path(catalog_path) : config.paths.level_catalog;
  fs::path cache_path = !cache_dir.empty() ? fs::path(cache_dir) : config.paths.cache_dir;
  if (catalog_file.empty() || cache_path.empty()) {
    throw ValidationError("judge needs a level catalog and a cache dir (via --config or flags)");
  }

  auto split = load_split(in, SplitSchema::main);
  auto catalog = load_level_catalog(catalog_file);
  auto backend = make_backend(config.backend, /*judge=*/true);
  GenerationCache cache(cache_path);

  BackendParams params;
  params.model_name = config.backend.model_name;
  params.temperature = config.backend.temperature;
  params.max_tokens = config.backend.max_tokens;
  JudgeBatchOptions options;
  options.batch.parallelism = config.backend.parallelism;
  options.batch.retries = config.backend.retries;
  options.prompt.language = config.judge.prompt_language;

  auto result = judge_batch(split.samples(), catalog, *backend, cache, params, options);
  save_verdicts(result.verdicts, out);
  fs::path failures_path = fs::path(out).string() + ".failures.jsonl";
  save_judge_failures(result.failures, failures_path);

  write_stage_manifest("judge", config, {in, catalog_file}, {out, failures_path},
                       {{"input_samples", static_cast<long>(split.samples().size())},
                        {"verdicts", static_cast<long>(result.verdicts.size())},
                        {"failures", static_cast<long>(result.failures.size())},
                        {"backend_calls", result.backend_calls}});
  std::cout << "judge: " << result.verdicts.size() << " verdicts, " << result.failures.size()
            << " failed, " << result.backend_calls << " backend calls -> " << out << "\n";
  return result.failures.empty() ? kExitOk : kExitPartialFailure;
}

int cmd_judge_filter(const GlobalOptions& global, const std::string& in,
                     const std::string& verdicts_path, const std::string& out,
                     const std::string& removed_out) {
  auto config = effective_config(global);
  auto split = load_split(in, SplitSchema::main);
  auto verdicts = load_verdicts(verdicts_path);

  auto result = apply_judge_filters(split, verdicts);
  save_split(result.kept, out);

  std::vector<std::string> removed_lines;
  for (const auto& removed : result.removed) {
    nlohmann::ordered_json rec;
    rec["sample_id"] = removed.sample_id;
    auto rules = nlohmann::json::array();
    for (const auto& rule : removed.rules) rules.push_back(to_string(rule));
    rec["rules"] = std::move(rules);
    auto triggers = nlohmann::json::array();
    for (const auto& trigger : removed.triggers) {
      triggers.push_back({{"level", trigger.level}, {"rule", to_string(trigger.rule)}});
    }
    rec["triggers"] = std::move(triggers);
    removed_lines.push_back(rec.dump());
  }
  fs::path removed_path =
      !removed_out.empty() ? fs::path(removed_out) : fs::path(out).string() + ".removed.jsonl";
  jsonl::write_lines(removed_path, removed_lines);

  write_stage_manifest("judge-filter", config, {in, verdicts_path}, {out, removed_path},
                       {{"input_samples", static_cast<long>(split.samples().size())},
                        {"kept", static_cast<long>(result.kept.samples().size())},
                        {"removed", static_cast<long>(result.removed.size())}});
  std::cout << "judge-filter: kept " << result.kept.samples().size() << ", removed "
            << result.removed.size() << " -> " << out << "\n";
  return kExitOk;
}

int cmd_calibrate(const GlobalOptions& global, const std::string& annotated_path,
                  const std::string& verdicts_path, const std::string& out_base) {
  auto config = effective_config(global);
  auto annotated = load_split(annotated_path, SplitSchema::annotated);
  auto verdicts = load_verdicts(verdicts_path);

  auto report = calibrate_judge(annotated.annotations(), verdicts);
  fs::path csv_path = out_base + ".csv";
  fs::path md_path = out_base + ".md";
  {
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot write " + csv_path.string());
    csv << calibration_report_csv(report);
  }
  {
    std::ofstream md(md_path, std::ios::binary | std::ios::trunc);
    if (!md) throw IoError("cannot write " + md_path.string());
    md << calibration_report_markdown(report);
  }
  write_stage_manifest("calibrate", config, {annotated_path, verdicts_path}, {csv_path, md_path},
                       {{"annotations", static_cast<long>(annotated.annotations().size())},
                        {"verdicts", static_cast<long>(verdicts.size())},
                        {"pairs", static_cast<long>(report.rows.size())}});
  for (const auto& row : report.rows) {
    std::cout << row.human_op << " ~ " << row.judge_criterion << ": rho=";
    if (row.defined) {
      std::cout << row.rho << " p=" << row.p << (row.significant ? " *" : "");
    } else {
      std::cout << "undefined";
    }
    std::cout << " (n=" << row.n << ")\n";
  }
  return kExitOk;
}

int cmd_evaluate(const GlobalOptions& global, const std::string& pred, const std::string& report_base,
                 const std::string& scores_file, const std::string& scorer_url,
                 const std::string& system_name, const std::string& dataset_name) {
  auto config = effective_config(global);
  auto predictions = metrics::load_predictions(pred);

  std::unique_ptr<metrics::SemanticScorer> scorer;
  if (!scores_file.empty() && !scorer_url.empty()) {
    throw ValidationError("evaluate: give either --scores or --scorer-url, not both");
  }
  if (!scores_file.empty()) scorer = std::make_unique<metrics::PrecomputedScoreFile>(scores_file);
  if (!scorer_url.empty()) scorer = std::make_unique<metrics::HttpScorer>(scorer_url);

  metrics::EvaluateOptions options;
  options.system_name = system_name;
  options.dataset_name = dataset_name;
  options.scorer = scorer.get();

  auto report = metrics::evaluate_predictions(predictions, options);
  metrics::write_report(report, report_base);

  fs::path stem = report_base;
  if (stem.extension() == ".csv" || stem.extension() == ".md") stem.replace_extension();
  std::vector<fs::path> inputs = {pred};
  if (!scores_file.empty()) inputs.push_back(scores_file);
  write_stage_manifest("evaluate", config, inputs,
                       {stem.string() + ".csv", stem.string() + ".per_sample.csv",
                        stem.string() + ".md"},
                       {{"predictions", static_cast<long>(predictions.size())}});
  std::cout << "evaluate: bleu=" << report.bleu << " sari=" << report.sari << " fre=" << report.fre
            << " compression=" << report.compression << " splits=" << report.sentence_splits
            << " copies=" << report.copies << "\n";
  return kExitOk;
}

int cmd_stats(const GlobalOptions& global, const std::string& ratings_path,
              const std::string& verdicts_path, const std::string& split_path,
              const std::string& out_dir) {
  auto config = effective_config(global);
  if (ratings_path.empty() && verdicts_path.empty()) {
    throw ValidationError("stats needs --ratings and/or --verdicts");
  }
  fs::create_directories(out_dir);
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::map<std::string, long> counts;

  if (!ratings_path.empty()) {
    auto rows = analysis::load_ratings_csv(ratings_path);
    inputs.push_back(ratings_path);
    counts["rating_rows"] = static_cast<long>(rows.size());

    // agreement per question: ordinal scale, plus the +-1 tolerance
    // variant for the complexity question
    std::ostringstream csv;
    std::ostringstream md;
    csv << "question,scale,alpha\n";
    md << "| question | scale | alpha |\n|---|---|---|\n";
    for (const std::string question : {"q1", "q2", "q3", "q5"}) {
      auto matrix = analysis::rating_matrix_for_question(rows, question,
                                                         analysis::AgreementScale::ordinal);
      double alpha = analysis::krippendorff_alpha(matrix);
      csv << question << ",ordinal," << alpha << '\n';
      md << "| " << question << " | ordinal | " << alpha << " |\n";
    }
    {
      auto matrix = analysis::rating_matrix_for_question(
          rows, "q5", analysis::AgreementScale::nominal_with_tolerance, 1);
      double alpha = analysis::krippendorff_alpha(matrix);
      csv << "q5,tolerance1," << alpha << '\n';
      md << "| q5 | tolerance1 | " << alpha << " |\n";
    }
    fs::path agreement_csv = fs::path(out_dir) / "agreement.csv";
    fs::path agreement_md = fs::path(out_dir) / "agreement.md";
    std::ofstream(agreement_csv, std::ios::binary) << csv.str();
    std::ofstream(agreement_md, std::ios::binary) << md.str();
    outputs.push_back(agreement_csv);
    outputs.push_back(agreement_md);

    auto distributions = analysis::aggregate_by_level(analysis::rating_level_records(rows));
    fs::path by_level_csv = fs::path(out_dir) / "ratings_by_level.csv";
    fs::path by_level_md = fs::path(out_dir) / "ratings_by_level.md";
    analysis::write_level_report_csv(distributions, by_level_csv);
    std::ofstream(by_level_md, std::ios::binary) << analysis::level_report_markdown(distributions);
    outputs.push_back(by_level_csv);
    outputs.push_back(by_level_md);
  }

  if (!verdicts_path.empty()) {
    auto verdicts = load_verdicts(verdicts_path);
    inputs.push_back(verdicts_path);
    counts["verdicts"] = static_cast<long>(verdicts.size());
    auto distributions = analysis::aggregate_by_level(verdict_level_records(verdicts));
    fs::path by_level_csv = fs::path(out_dir) / "verdicts_by_level.csv";
    fs::path by_level_md = fs::path(out_dir) / "verdicts_by_level.md";
    analysis::write_level_report_csv(distributions, by_level_csv);
    std::ofstream(by_level_md, std::ios::binary) << analysis::level_report_markdown(distributions);
    outputs.push_back(by_level_csv);
    outputs.push_back(by_level_md);
  }

  if (!split_path.empty()) {
    auto split = load_split(split_path, SplitSchema::lenient);
    inputs.push_back(split_path);
    counts["split_samples"] = static_cast<long>(split.samples().size());
    std::map<int, std::pair<double, long>> fre_sums;  // level -> (sum, n)
    for (const auto& sample : split.samples()) {
      for (const auto& [level, paraphrase] : sample.paraphrases) {
        fre_sums[level.value()].first += metrics::fre_german(paraphrase);
        fre_sums[level.value()].second += 1;
      }
    }
    std::ostringstream csv;
    csv << "level,mean_fre,n\n";
    for (const auto& [level, entry] : fre_sums) {
      csv << level << ',' << entry.first / static_cast<double>(entry.second) << ',' << entry.second
          << '\n';
    }
    fs::path fre_csv = fs::path(out_dir) / "fre_by_level.csv";
    std::ofstream(fre_csv, std::ios::binary) << csv.str();
    outputs.push_back(fre_csv);
  }

  write_stage_manifest("stats", config, inputs, outputs, counts);
  std::cout << "stats: wrote " << outputs.size() << " report files to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"readability-controlled paraphrase corpus pipeline"};
  app.set_version_flag("--version", PARAFORGE_VERSION);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "pipeline configuration file (JSON)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "sample paragraphs from a popularity-ranked dump");
  std::string ingest_dump, ingest_exclude, ingest_out;
  long ingest_top_n = 0, ingest_count = 0, ingest_max_words = 80;
  std::uint64_t ingest_seed = 0;
  bool ingest_assert_sorted = false;
  ingest->add_option("--dump", ingest_dump, "paragraph dump (JSONL)")->required();
  ingest->add_option("--top-n", ingest_top_n, "popularity rank cutoff")->required();
  ingest->add_option("--count", ingest_count, "number of samples to draw")->required();
  ingest->add_option("--max-words", ingest_max_words, "maximum words per paragraph");
  auto* seed_opt = ingest->add_option("--seed", ingest_seed, "sampling seed");
  ingest->add_option("--exclude", ingest_exclude, "split or id list whose ids are excluded");
  ingest->add_flag("--assert-sorted", ingest_assert_sorted, "error on unsorted input");
  ingest->add_option("--out", ingest_out, "output split (JSONL)")->required();

  // synthesize
  auto* synthesize = app.add_subcommand("synthesize", "generate five-level paraphrases");
  std::string syn_in, syn_out, syn_backend, syn_catalog, syn_one_shot, syn_cache;
  int syn_parallelism = 0;
  synthesize->add_option("--in", syn_in, "source split (JSONL)")->required();
  synthesize->add_option("--out", syn_out, "output split (JSONL)")->required();
  synthesize->add_option("--backend", syn_backend, "http or mock")
      ->check(CLI::IsMember({"http", "mock"}));
  synthesize->add_option("--parallelism", syn_parallelism, "concurrent requests");
  synthesize->add_option("--catalog", syn_catalog, "level catalog file");
  synthesize->add_option("--one-shot", syn_one_shot, "one-shot example file");
  synthesize->add_option("--cache-dir", syn_cache, "generation cache directory");

  // filter
  auto* filter = app.add_subcommand("filter", "apply the automatic pre-filters");
  std::string filter_in, filter_out, filter_flags, filter_failures, filter_vocab, filter_profiles;
  filter->add_option("--in", filter_in, "synthesized split (JSONL)")->required();
  filter->add_option("--out", filter_out, "clean split (JSONL)")->required();
  filter->add_option("--flags-out", filter_flags, "filter flags output (JSONL)");
  filter->add_option("--failures", filter_failures, "synthesis failures file (JSONL)");
  filter->add_option("--vocab", filter_vocab, "vocabulary file");
  filter->add_option("--profiles", filter_profiles, "language profile directory");

  // review
  auto* review = app.add_subcommand("review", "resolve pre-filter flags");
  std::string review_flags, review_decisions, review_out, review_in, review_clean;
  review->add_option("--flags", review_flags, "flags file (JSONL)")->required();
  review->add_option("--decisions", review_decisions, "decisions CSV (index,keep|remove)");
  review->add_option("--out", review_out, "resolved flags output (JSONL)")->required();
  review->add_option("--in", review_in, "original split, to emit the final clean split");
  review->add_option("--clean-out", review_clean, "final clean split output");

  // judge
  auto* judge = app.add_subcommand("judge", "run the LLM judge over a split");
  std::string judge_in, judge_out, judge_backend, judge_catalog, judge_cache, judge_language;
  int judge_parallelism = 0;
  judge->add_option("--in", judge_in, "split to judge (JSONL)")->required();
  judge->add_option("--out", judge_out, "verdicts output (JSONL)")->required();
  judge->add_option("--backend", judge_backend, "http or mock")
      ->check(CLI::IsMember({"http", "mock"}));
  judge->add_option("--parallelism", judge_parallelism, "concurrent requests");
  judge->add_option("--catalog", judge_catalog, "level catalog file");
  judge->add_option("--cache-dir", judge_cache, "generation cache directory");
  judge->add_option("--language", judge_language, "judge prompt language (de or en)");

  // judge-filter
  auto* judge_filter = app.add_subcommand("judge-filter", "apply the verdict removal rules");
  std::string jf_in, jf_verdicts, jf_out, jf_removed;
  judge_filter->add_option("--in", jf_in, "split to filter (JSONL)")->required();
  judge_filter->add_option("--verdicts", jf_verdicts, "judge verdicts (JSONL)")->required();
  judge_filter->add_option("--out", jf_out, "kept split output (JSONL)")->required();
  judge_filter->add_option("--removed", jf_removed, "removed samples output (JSONL)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "correlate verdicts with edit annotations");
  std::string cal_annotated, cal_verdicts, cal_out;
  calibrate->add_option("--annotated", cal_annotated, "annotated split (JSONL)")->required();
  calibrate->add_option("--verdicts", cal_verdicts, "judge verdicts (JSONL)")->required();
  calibrate->add_option("--out", cal_out, "report base path (.csv/.md appended)")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score prediction files");
  std::string eval_pred, eval_report, eval_scores, eval_scorer_url;
  std::string eval_system = "system", eval_dataset = "dataset";
  evaluate->add_option("--pred", eval_pred, "predictions (JSONL)")->required();
  evaluate->add_option("--report", eval_report, "report base path")->required();
  evaluate->add_option("--scores", eval_scores, "precomputed similarity scores (JSONL)");
  evaluate->add_option("--scorer-url", eval_scorer_url, "semantic scoring endpoint");
  evaluate->add_option("--system", eval_system, "system name for the report");
  evaluate->add_option("--dataset", eval_dataset, "dataset name for the report");

  // stats
  auto* stats = app.add_subcommand("stats", "agreement and per-level aggregation reports");
  std::string stats_ratings, stats_verdicts, stats_split, stats_out = "stats";
  stats->add_option("--ratings", stats_ratings, "human ratings (CSV)");
  stats->add_option("--verdicts", stats_verdicts, "judge verdicts (JSONL)");
  stats->add_option("--split", stats_split, "split for per-level FRE means (JSONL)");
  stats->add_option("--out", stats_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      return cmd_ingest(global, ingest_dump, ingest_top_n, ingest_count, ingest_max_words,
                        ingest_seed, seed_opt->count() > 0, ingest_exclude, ingest_assert_sorted,
                        ingest_out);
    }
    if (synthesize->parsed()) {
      return cmd_synthesize(global, syn_in, syn_out, syn_backend, syn_parallelism, syn_catalog,
                            syn_one_shot, syn_cache);
    }
    if (filter->parsed()) {
      return cmd_filter(global, filter_in, filter_out, filter_flags, filter_failures, filter_vocab,
                        filter_profiles);
    }
    if (review->parsed()) {
      return cmd_review(global, review_flags, review_decisions, review_out, review_in, review_clean);
    }
    if (judge->parsed()) {
      return cmd_judge(global, judge_in, judge_out, judge_backend, judge_parallelism, judge_catalog,
                       judge_cache, judge_language);
    }
    if (judge_filter->parsed()) {
      return cmd_judge_filter(global, jf_in, jf_verdicts, jf_out, jf_removed);
    }
    if (calibrate->parsed()) {
      return cmd_calibrate(global, cal_annotated, cal_verdicts, cal_out);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(global, eval_pred, eval_report, eval_scores, eval_scorer_url, eval_system,
                          eval_dataset);
    }
    if (stats->parsed()) {
      return cmd_stats(global, stats_ratings, stats_verdicts, stats_split, stats_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitPartialFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
