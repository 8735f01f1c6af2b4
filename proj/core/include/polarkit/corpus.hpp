#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polarkit {

/// Binary document-level sentiment.
enum class Sentiment { Positive, Negative };

enum class Domain { Movie, Product, Book, Other };

std::string_view to_string(Sentiment s) noexcept;
std::string_view to_string(Domain d) noexcept;
std::optional<Domain> parse_domain(std::string_view text) noexcept;
/// Accepts the corpus spellings "pos" / "neg".
std::optional<Sentiment> parse_sentiment(std::string_view text) noexcept;

constexpr Sentiment opposite(Sentiment s) noexcept {
  return s == Sentiment::Positive ? Sentiment::Negative : Sentiment::Positive;
}

struct Review {
  std::string id;
  Domain domain = Domain::Other;
  std::string text;
  Sentiment gold = Sentiment::Positive;

  friend bool operator==(const Review&, const Review&) = default;
};

/// Ordered, id-unique collection of labeled reviews.
class Corpus {
 public:
  Corpus() = default;
  /// Throws Error{DuplicateId} or Error{MalformedRecord} (empty text).
  explicit Corpus(std::vector<Review> reviews);

  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  std::size_t size() const noexcept { return reviews_.size(); }
  bool empty() const noexcept { return reviews_.empty(); }
  std::size_t count(Sentiment s) const noexcept;
  const std::map<Sentiment, std::size_t>& label_counts() const noexcept { return label_counts_; }
  const Review* find(std::string_view id) const;

 private:
  std::vector<Review> reviews_;
  std::map<Sentiment, std::size_t> label_counts_;
};

/// Reads the JSON Lines corpus format:
///   {"id": "...", "domain": "movie|product|book|other", "text": "...", "label": "pos|neg"}
/// Blank lines are skipped. Errors carry the 1-based line number.
Corpus load_corpus(const std::filesystem::path& path);
Corpus read_corpus(std::istream& in);
void write_corpus(const Corpus& corpus, std::ostream& out);

/// NFC-normalizes, splits on Unicode whitespace and strips leading/trailing
/// punctuation from every token. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

/// Train share expressed as train:test parts, e.g. {7, 3}.
struct SplitRatio {
  std::uint32_t train = 7;
  std::uint32_t test = 3;

  double train_fraction() const noexcept {
    return static_cast<double>(train) / static_cast<double>(train + test);
  }
  /// ceil(n * train / (train + test)), computed exactly.
  std::size_t train_size(std::size_t n) const noexcept;
  friend bool operator==(const SplitRatio&, const SplitRatio&) = default;
};

/// Parses "7:3" or a decimal fraction such as "0.7".
std::optional<SplitRatio> parse_split_ratio(std::string_view text);

struct CorpusSplit {
  std::set<std::string> train_ids;
  std::set<std::string> test_ids;
  SplitRatio ratio;
  std::uint64_t seed = 0;
  bool stratified = true;

  bool in_train(const std::string& id) const { return train_ids.contains(id); }
  bool in_test(const std::string& id) const { return test_ids.contains(id); }
};

/// Deterministic partition of `corpus`. The train side receives
/// ceil(ratio * N) items; when stratified, each label gets the floor of its
/// share and the leftover goes to the labels with the largest fractional
/// remainder (Positive first on ties).
CorpusSplit split_corpus(const Corpus& corpus, SplitRatio ratio, std::uint64_t seed,
                         bool stratified = true);

/// Reviews of `corpus` on one side of the split, in corpus order.
std::vector<const Review*> select(const Corpus& corpus, const std::set<std::string>& ids);

}  // namespace polarkit
