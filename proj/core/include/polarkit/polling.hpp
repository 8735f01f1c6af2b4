#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polarkit/corpus.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/segmenter.hpp"

namespace polarkit {

enum class PollingMode { Unigram, Bigram, UnigramPlusBigram };

std::string_view to_string(PollingMode mode) noexcept;
/// "unigram", "bigram", "combined" (also "uni+bi").
std::optional<PollingMode> parse_polling_mode(std::string_view text) noexcept;

enum class Verdict { Positive, Negative, Unclassified };

std::string_view to_string(Verdict v) noexcept;

struct MatchCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;

  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct PollScore {
  std::int64_t score = 0;
  MatchCounts unigrams;
  MatchCounts bigrams;

  Verdict verdict() const noexcept {
    return score > 0 ? Verdict::Positive : score < 0 ? Verdict::Negative : Verdict::Unclassified;
  }
  friend bool operator==(const PollScore&, const PollScore&) = default;
};

/// Precompiled +1/-1 matcher over the unigram entries of `uni` and the
/// bigram entries of `bi`. Every occurrence counts; a token may take part in
/// both a unigram and a bigram match.
///
/// With segmentation rules, each lexicon key is segmented and matched as a
/// contiguous run of the (already segmented) review tokens.
class PolarityMatcher {
 public:
  /// Throws Error{UnfilteredLexicon} if a considered entry is neither
  /// Positive nor Negative.
  PolarityMatcher(const Lexicon& uni, const Lexicon& bi,
                  const SegmentationRules* rules = nullptr);

  PollScore score(const std::vector<std::string>& tokens, PollingMode mode) const;

  std::size_t unigram_patterns() const noexcept { return uni_.patterns.size(); }
  std::size_t bigram_patterns() const noexcept { return bi_.patterns.size(); }

 private:
  struct PatternSet {
    std::unordered_map<std::string, MatchCounts> patterns;
    std::vector<std::size_t> lengths;  // distinct pattern lengths, ascending
  };
  static void add(PatternSet& set, const LexiconEntry& entry, const SegmentationRules* rules);
  static MatchCounts match(const PatternSet& set, const std::vector<std::string>& tokens);

  PatternSet uni_;
  PatternSet bi_;
};

PollScore poll_score(const std::vector<std::string>& tokens, const Lexicon& uni,
                     const Lexicon& bi, PollingMode mode);

struct PollingVerdict {
  std::string review_id;
  Sentiment gold = Sentiment::Positive;
  PollScore score;

  Verdict verdict() const noexcept { return score.verdict(); }
};

struct DomainTally {
  std::size_t correct = 0;
  std::size_t classified = 0;
  std::size_t total = 0;
};

/// Which reviews a polling run is scored on. Auto uses the full corpus for
/// pure unigram polling and the test split otherwise.
enum class EvalScope { Auto, TestSplit, FullCorpus };

struct PollingOptions {
  PollingMode mode = PollingMode::Unigram;
  bool segmentation = false;
  const SegmentationRules* rules = nullptr;  // required when segmentation is on
  EvalScope scope = EvalScope::Auto;
  std::string column;                        // report column label
};

struct PollingReport {
  PollingMode mode = PollingMode::Unigram;
  bool segmentation = false;
  std::string column;
  /// 100 * correct / classified; absent when nothing was classified.
  std::optional<double> accuracy_pct;
  std::size_t correct = 0;
  std::size_t unclassified = 0;
  std::size_t total = 0;
  std::map<Domain, DomainTally> per_domain;
  std::vector<PollingVerdict> verdicts;

  std::size_t classified() const noexcept { return total - unclassified; }
};

/// Majority-polling evaluation. `bigrams` must already be limited to bigrams
/// extracted from the training side of `split` (see training_bigram_lexicon).
/// Throws Error{EmptyTestSet} when no review is in scope and
/// Error{InvalidArgument} when a bigram mode or test-split scope lacks a split.
PollingReport evaluate_polling(const Corpus& corpus, const CorpusSplit* split,
                               const Lexicon& unigrams, const Lexicon& bigrams,
                               const PollingOptions& options);

/// Polar bigram entries of `bigram_lexicon` whose key occurs at least
/// `min_count` times in the training side of `split`.
Lexicon training_bigram_lexicon(const Corpus& corpus, const CorpusSplit& split,
                                const Lexicon& bigram_lexicon, std::uint64_t min_count = 2);

/// Default polling column labels.
std::vector<std::string> default_polling_columns();

/// Accuracy grid: one column per label in `columns`, rows "Before
/// Segmentation" / "Unclassified reviews" / "After Segmentation" /
/// "Unclassified reviews". Missing cells print U+2014; a cell with nothing
/// classified prints "n/a" for its accuracy.
void emit_polling_table(const std::vector<PollingReport>& reports, std::ostream& out,
                        const std::vector<std::string>& columns = default_polling_columns());

/// Per-review verdict listing.
void write_verdicts(const PollingReport& report, std::ostream& out);

}  // namespace polarkit
