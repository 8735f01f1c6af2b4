#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polarkit/corpus.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/segmenter.hpp"

namespace polarkit {

using Bigram = std::pair<std::string, std::string>;

struct BigramCounts {
  std::map<Bigram, std::uint64_t> counts;
  std::string source;  // e.g. "full" or "train:seed=7"

  std::uint64_t total() const;
};

/// Counts adjacent pairs within each stream; pairs never span two streams.
BigramCounts count_bigrams(const std::vector<std::vector<std::string>>& token_streams);

struct BigramCandidate {
  std::string first;
  std::string second;
  std::uint64_t count = 0;
  std::optional<std::string> gloss;

  std::string key() const { return first + ' ' + second; }
  friend bool operator==(const BigramCandidate&, const BigramCandidate&) = default;
};

/// Bigrams with count >= min_count, by descending count then ascending key.
/// Throws Error{InvalidThreshold} when min_count < 1.
std::vector<BigramCandidate> threshold_bigrams(const BigramCounts& counts,
                                               std::uint64_t min_count = 2);

/// Candidate TSV: header "ngram<TAB>count", then one row per candidate. A
/// third gloss column is accepted on read, and '#' lines are skipped.
void write_candidates(const std::vector<BigramCandidate>& candidates, std::ostream& out);
void export_candidates(const std::vector<BigramCandidate>& candidates,
                       const std::filesystem::path& path);
std::vector<BigramCandidate> read_candidates(std::istream& in);
std::vector<BigramCandidate> load_candidates(const std::filesystem::path& path);

enum class ExtractionScope { FullCorpus, TrainSplit };

/// Token streams for the reviews in scope, in corpus order. TrainSplit
/// requires `split`. Segmentation is applied when `rules` is non-null.
std::vector<std::vector<std::string>> corpus_streams(const Corpus& corpus, ExtractionScope scope,
                                                     const CorpusSplit* split = nullptr,
                                                     const SegmentationRules* rules = nullptr);

/// Restricts a bigram lexicon to the keys present in `candidates`.
Lexicon restrict_to_candidates(const Lexicon& bigrams,
                               const std::vector<BigramCandidate>& candidates);

}  // namespace polarkit
