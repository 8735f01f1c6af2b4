#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarkit/lexicon.hpp"

namespace polarkit {

/// What one annotator said about one item: a final label or "uncertain".
enum class Judgment { Positive, Negative, Neutral, Ambiguous, Uncertain };

std::string_view to_string(Judgment j) noexcept;
/// "pos", "neg", "neu", "amb", "uncertain".
std::optional<Judgment> parse_judgment(std::string_view text) noexcept;
std::optional<PolarityLabel> to_label(Judgment j) noexcept;
Judgment to_judgment(PolarityLabel label) noexcept;

struct Annotator {
  std::string id;
  int experience_rank = 0;  // lower is more senior
};

struct AnnotationRecord {
  std::string item_id;
  std::string annotator_id;
  Judgment judgment = Judgment::Uncertain;
  std::int64_t timestamp = 0;
  unsigned round = 1;
};

struct AdjudicationOutcome {
  enum class Kind { Final, ReIterate };
  Kind kind = Kind::ReIterate;
  std::optional<PolarityLabel> label;  // set iff kind == Final
  bool borderline = false;             // exactly one side was Uncertain
  bool disagreement = false;           // resolved by seniority

  bool final() const noexcept { return kind == Kind::Final; }
  friend bool operator==(const AdjudicationOutcome&, const AdjudicationOutcome&) = default;
};

/// Resolves two judgments on the same item:
///  - equal labels finalize;
///  - conflicting labels resolve to the more senior annotator;
///  - a single Uncertain defers to the other annotator (borderline);
///  - two Uncertain judgments send the item to re-iteration.
/// Throws Error{ItemMismatch, SameAnnotator, UnknownAnnotator}.
AdjudicationOutcome adjudicate(const AnnotationRecord& a, const AnnotationRecord& b,
                               std::span<const Annotator> annotators);

enum class Weighting { Unweighted, Linear };

std::string_view to_string(Weighting w) noexcept;
std::optional<Weighting> parse_weighting(std::string_view text) noexcept;

/// k x k agreement counts; rows are the first rater, columns the second.
struct ContingencyTable {
  std::size_t categories = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::size_t row, std::size_t col) const { return counts[row * categories + col]; }
  std::uint64_t total() const;
};

struct KappaResult {
  double kappa = 0.0;
  double observed_agreement = 0.0;  // p_o
  double chance_agreement = 0.0;    // p_e
  ContingencyTable table;
};

/// Cohen's kappa over pairs of category indices in [0, categories).
///
/// Unweighted: (p_o - p_e) / (1 - p_e).
/// Linear:     1 - sum(w_ij * o_ij) / sum(w_ij * e_ij), w_ij = |i - j|, so the
///             category index is its position on the ordinal scale.
/// Returns exactly 1 when both raters used one and the same category.
/// Throws Error{EmptyInput} or Error{DegenerateMarginals}.
KappaResult cohen_kappa(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                        std::size_t categories, Weighting weighting);

struct KappaOptions {
  Weighting weighting = Weighting::Linear;
  /// Keep items where at least one side is Uncertain (as a fifth category).
  bool include_borderline = true;
  /// Ordinal scale for linear weights. Judgments missing from it are rejected.
  std::vector<Judgment> order = default_order();

  /// Negative < Ambiguous < Uncertain < Neutral < Positive.
  static std::vector<Judgment> default_order();
};

KappaResult cohen_kappa(std::span<const std::pair<Judgment, Judgment>> pairs,
                        const KappaOptions& options = {});

/// The category order actually used for `options` (Uncertain dropped when
/// borderline items are excluded).
std::vector<Judgment> effective_order(const KappaOptions& options);

}  // namespace polarkit
