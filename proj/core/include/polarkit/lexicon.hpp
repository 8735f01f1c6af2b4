#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polarkit {

/// Final word-level polarity label.
enum class PolarityLabel { Positive, Negative, Neutral, Ambiguous };

inline constexpr std::array<PolarityLabel, 4> kAllLabels = {
    PolarityLabel::Positive, PolarityLabel::Negative, PolarityLabel::Neutral,
    PolarityLabel::Ambiguous};

/// "pos", "neg", "neu", "amb".
std::string_view to_string(PolarityLabel label) noexcept;
std::optional<PolarityLabel> parse_label(std::string_view text) noexcept;

constexpr bool is_polar(PolarityLabel label) noexcept {
  return label == PolarityLabel::Positive || label == PolarityLabel::Negative;
}

enum class Provenance { SentiWordNet, OntoSenseNet, BigramExtraction, Manual };

std::string_view to_string(Provenance p) noexcept;
std::optional<Provenance> parse_provenance(std::string_view text) noexcept;

struct LexiconEntry {
  std::vector<std::string> ngram;  // 1 or 2 tokens
  PolarityLabel label = PolarityLabel::Neutral;
  Provenance provenance = Provenance::Manual;
  std::optional<std::string> gloss;

  std::string key() const;
  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Joins tokens with single spaces.
std::string ngram_key(const std::vector<std::string>& tokens);
/// Inverse of ngram_key.
std::vector<std::string> split_key(std::string_view key);

/// Unigram/bigram polarity lexicon keyed by space-joined n-gram.
class Lexicon {
 public:
  using Map = std::map<std::string, LexiconEntry, std::less<>>;

  /// Adds an entry; throws Error{InvalidEntry} for a bad n-gram and
  /// Error{DuplicateKey} when the key already exists. An empty gloss is
  /// stored as no gloss.
  void add(LexiconEntry entry);
  /// Adds or replaces.
  void put(LexiconEntry entry);

  const LexiconEntry* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// True when every entry is Positive or Negative.
  bool polar() const;
  Lexicon unigrams() const;
  Lexicon bigrams() const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  static void validate(LexiconEntry& entry);
  Map entries_;
};

/// Keeps exactly the Positive and Negative entries.
Lexicon filter_polar(const Lexicon& lexicon);

/// Label histogram in the column order Positive, Negative, Neutral, Ambiguous.
struct LabelDistribution {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t ambiguous = 0;

  std::size_t total() const noexcept { return positive + negative + neutral + ambiguous; }
  std::size_t count(PolarityLabel label) const noexcept;
  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;
};

LabelDistribution lexicon_stats(const Lexicon& lexicon);

/// Writes the distribution table: a header row followed by one row per named
/// resource (Resource, Positive, Negative, Neutral, Ambiguous, Total).
void write_stats_table(std::ostream& out,
                       const std::vector<std::pair<std::string, LabelDistribution>>& rows);

/// Lexicon TSV: header line, then ngram-key, label, provenance, gloss.
/// Tabs, newlines and backslashes inside the gloss are backslash-escaped.
Lexicon load_lexicon(const std::filesystem::path& path);
Lexicon read_lexicon(std::istream& in);
void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);
void write_lexicon(const Lexicon& lexicon, std::ostream& out);

inline constexpr std::string_view kLexiconHeader = "ngram\tlabel\tprovenance\tgloss";

}  // namespace polarkit
