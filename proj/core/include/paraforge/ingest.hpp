#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "paraforge/corpus.hpp"

namespace paraforge {

// One paragraph from the popularity-ranked dump. rank 1 = most viewed.
struct ParagraphRecord {
  std::string text;
  std::string page_title;
  long popularity_rank = 0;
};

// Count of maximal non-whitespace runs.
long word_count(const std::string& s);

// Reads a JSONL dump with fields text/page_title/popularity_rank ("rank"
// accepted as an alias). Enforces the >=100-character record invariant
// (code points, not bytes).
std::vector<ParagraphRecord> load_paragraph_dump(const std::filesystem::path& path);

// Stable content-derived sample id (sha256 prefix of the paragraph text).
std::string paragraph_id(const std::string& paragraph_text);

struct SamplingOptions {
  long top_n = 0;           // keep records with popularity_rank <= top_n
  std::size_t count = 0;    // samples to draw
  long max_words = 0;       // keep records with word_count <= max_words
  std::uint64_t seed = 0;
  bool assert_sorted = false;  // error on unsorted input instead of sorting
};

// Draws `count` samples uniformly without replacement (seeded
// Fisher-Yates over the eligible records) from records with
// popularity_rank <= top_n and word_count <= max_words, skipping
// exclude_ids. Deterministic for a fixed seed; output order is the
// shuffle order.
std::vector<Sample> sample_paragraphs(const std::vector<ParagraphRecord>& source,
                                      const SamplingOptions& options,
                                      const std::unordered_set<std::string>& exclude_ids = {});

// Deterministic cross-platform uniform shuffle (std::shuffle is
// implementation-defined, so batches would not reproduce across stdlibs).
void seeded_shuffle(std::vector<std::size_t>& indices, std::uint64_t seed);

}  // namespace paraforge
