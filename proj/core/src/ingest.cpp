#include "paraforge/ingest.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <random>

#include "paraforge/errors.hpp"
#include "paraforge/hashing.hpp"
#include "paraforge/jsonl.hpp"
#include "paraforge/text.hpp"

namespace paraforge {

long word_count(const std::string& s) {
  return static_cast<long>(text::split_whitespace(s).size());
}

std::vector<ParagraphRecord> load_paragraph_dump(const std::filesystem::path& path) {
  auto lines = jsonl::read_lines(path);
  std::vector<ParagraphRecord> records;
  records.reserve(lines.size());
  for (const auto& line : lines) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line.text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("paragraph dump: malformed JSON (line " + std::to_string(line.number) +
                            "): " + e.what());
    }
    ParagraphRecord p;
    try {
      p.text = rec.at("text").get<std::string>();
      p.page_title = rec.at("page_title").get<std::string>();
      if (rec.contains("popularity_rank")) {
        p.popularity_rank = rec.at("popularity_rank").get<long>();
      } else {
        p.popularity_rank = rec.at("rank").get<long>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("paragraph dump: missing field (line " + std::to_string(line.number) +
                            "): " + e.what());
    }
    if (text::codepoint_count(p.text) < 100) {
      throw ValidationError("paragraph dump: text under 100 characters (line " +
                            std::to_string(line.number) + ")");
    }
    records.push_back(std::move(p));
  }
  return records;
}

std::string paragraph_id(const std::string& paragraph_text) {
  return sha256_hex(paragraph_text).substr(0, 16);
}

namespace {

// Bounded uniform draw by rejection; avoids the unspecified
// std::uniform_int_distribution mapping.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

void seeded_shuffle(std::vector<std::size_t>& indices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = indices.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(indices[i - 1], indices[j]);
  }
}

std::vector<Sample> sample_paragraphs(const std::vector<ParagraphRecord>& source,
                                      const SamplingOptions& options,
                                      const std::unordered_set<std::string>& exclude_ids) {
  std::vector<std::size_t> order(source.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  bool sorted = std::is_sorted(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return source[a].popularity_rank < source[b].popularity_rank;
  });
  if (!sorted) {
    if (options.assert_sorted) {
      throw ValidationError("paragraph source is not sorted by popularity_rank");
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return source[a].popularity_rank < source[b].popularity_rank;
    });
  }

  std::vector<std::size_t> eligible;
  for (std::size_t idx : order) {
    const auto& rec = source[idx];
    if (rec.popularity_rank > options.top_n) continue;
    if (word_count(rec.text) > options.max_words) continue;
    if (exclude_ids.count(paragraph_id(rec.text))) continue;
    eligible.push_back(idx);
  }
  if (eligible.size() < options.count) {
    throw ValidationError("insufficient eligible records: need " + std::to_string(options.count) +
                          ", have " + std::to_string(eligible.size()));
  }

  seeded_shuffle(eligible, options.seed);

  std::vector<Sample> out;
  out.reserve(options.count);
  for (std::size_t i = 0; i < options.count; ++i) {
    const auto& rec = source[eligible[i]];
    Sample s;
    s.id = paragraph_id(rec.text);
    s.original = rec.text;
    s.source_meta.page_title = rec.page_title;
    s.source_meta.popularity_rank = rec.popularity_rank;
    s.source_meta.word_count = word_count(rec.text);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace paraforge
