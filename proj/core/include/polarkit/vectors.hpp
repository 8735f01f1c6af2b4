#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polarkit/lexicon.hpp"
#include "polarkit/polling.hpp"

namespace polarkit {

/// Token -> dense vector, all of one dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  /// Inserts or replaces. Throws Error{DimensionMismatch}.
  void put(std::string token, std::vector<double> vec);
  const std::vector<double>* find(std::string_view token) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  bool empty() const noexcept { return vectors_.empty(); }

  /// Tokens in byte order.
  std::vector<std::string> tokens() const;
  /// Every vector multiplied by `factor`.
  EmbeddingTable scaled(double factor) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::size_t dim_;
  std::unordered_map<std::string, std::vector<double>, Hash, std::equal_to<>> vectors_;
};

struct EmbeddingLoad {
  EmbeddingTable table;
  std::vector<std::string> warnings;
};

/// word2vec text format: "count dim" header, then "token v1 ... v_dim" rows.
/// A repeated token keeps its last vector and yields a warning.
/// Throws Error{MalformedHeader}, Error{DimensionMismatch} (wrong arity) or
/// Error{MalformedRow} (unparsable value), all with the line number.
EmbeddingLoad load_embeddings(const std::filesystem::path& path);
EmbeddingLoad read_embeddings(std::istream& in);
/// Writes the same format, tokens in byte order, shortest round-trip values.
void write_embeddings(const EmbeddingTable& table, std::ostream& out);

struct DocVector {
  std::vector<double> values;
  std::size_t oov_count = 0;
};

/// Mean of the in-vocabulary token vectors; OOV tokens are skipped and
/// counted. An all-OOV document maps to the zero vector.
DocVector doc_vector(const std::vector<std::string>& tokens, const EmbeddingTable& table);

inline constexpr std::array<std::string_view, 4> kPolarityFeatureNames = {"pos_uni", "neg_uni",
                                                                          "pos_bi", "neg_bi"};

struct FeatureVector {
  enum class Layout { Plain, Augmented };

  std::vector<double> values;
  Layout layout = Layout::Plain;
  std::size_t embedding_dim = 0;
};

struct AugmentOptions {
  /// Divide the four counts by the token count.
  bool length_normalize = false;
};

/// Appends [pos_uni, neg_uni, pos_bi, neg_bi] match counts to `doc_vec`,
/// counted exactly like poll_score in combined mode.
FeatureVector augment(const std::vector<double>& doc_vec, const std::vector<std::string>& tokens,
                      const PolarityMatcher& matcher, const AugmentOptions& options = {});
FeatureVector augment(const std::vector<double>& doc_vec, const std::vector<std::string>& tokens,
                      const Lexicon& uni, const Lexicon& bi, const AugmentOptions& options = {});

/// Column subsets compared per classifier.
enum class FeatureSet { Plain, PlusUnigram, PlusBigram, PlusBoth };

inline constexpr std::array<FeatureSet, 4> kAllFeatureSets = {
    FeatureSet::Plain, FeatureSet::PlusUnigram, FeatureSet::PlusBigram, FeatureSet::PlusBoth};

std::string_view to_string(FeatureSet fs) noexcept;
std::optional<FeatureSet> parse_feature_set(std::string_view text) noexcept;

/// Projects an augmented vector onto the columns of `set`.
std::vector<double> select_features(const FeatureVector& fv, FeatureSet set);

/// Feature-matrix TSV: id, label, d0..d{dim-1}, then the four tail features.
struct FeatureRow {
  std::string id;
  std::string label;
  FeatureVector features;
};
void write_feature_matrix(const std::vector<FeatureRow>& rows, std::ostream& out);

}  // namespace polarkit
