#include "polarkit/agreement.hpp"

#include <algorithm>
#include <numeric>

#include "polarkit/error.hpp"

namespace polarkit {

std::string_view to_string(Judgment j) noexcept {
  switch (j) {
    case Judgment::Positive: return "pos";
    case Judgment::Negative: return "neg";
    case Judgment::Neutral: return "neu";
    case Judgment::Ambiguous: return "amb";
    case Judgment::Uncertain: return "uncertain";
  }
  return "uncertain";
}

std::optional<Judgment> parse_judgment(std::string_view text) noexcept {
  for (auto j : {Judgment::Positive, Judgment::Negative, Judgment::Neutral, Judgment::Ambiguous,
                 Judgment::Uncertain})
    if (text == to_string(j)) return j;
  return std::nullopt;
}

std::optional<PolarityLabel> to_label(Judgment j) noexcept {
  switch (j) {
    case Judgment::Positive: return PolarityLabel::Positive;
    case Judgment::Negative: return PolarityLabel::Negative;
    case Judgment::Neutral: return PolarityLabel::Neutral;
    case Judgment::Ambiguous: return PolarityLabel::Ambiguous;
    case Judgment::Uncertain: return std::nullopt;
  }
  return std::nullopt;
}

Judgment to_judgment(PolarityLabel label) noexcept {
  switch (label) {
    case PolarityLabel::Positive: return Judgment::Positive;
    case PolarityLabel::Negative: return Judgment::Negative;
    case PolarityLabel::Neutral: return Judgment::Neutral;
    case PolarityLabel::Ambiguous: return Judgment::Ambiguous;
  }
  return Judgment::Uncertain;
}

AdjudicationOutcome adjudicate(const AnnotationRecord& a, const AnnotationRecord& b,
                               std::span<const Annotator> annotators) {
  if (a.item_id != b.item_id)
    throw Error(Errc::ItemMismatch,
                "records refer to different items '" + a.item_id + "' and '" + b.item_id + "'");
  if (a.annotator_id == b.annotator_id)
    throw Error(Errc::SameAnnotator, "both records come from annotator '" + a.annotator_id + "'");
  auto lookup = [&](const std::string& id) -> const Annotator& {
    auto it = std::find_if(annotators.begin(), annotators.end(),
                           [&](const Annotator& x) { return x.id == id; });
    if (it == annotators.end()) throw Error(Errc::UnknownAnnotator, "unknown annotator '" + id + "'");
    return *it;
  };
  const Annotator& ann_a = lookup(a.annotator_id);
  const Annotator& ann_b = lookup(b.annotator_id);

  AdjudicationOutcome out;
  const auto la = to_label(a.judgment);
  const auto lb = to_label(b.judgment);
  if (!la && !lb) return out;  // ReIterate

  out.kind = AdjudicationOutcome::Kind::Final;
  if (!la || !lb) {
    out.label = la ? la : lb;
    out.borderline = true;
  } else if (*la == *lb) {
    out.label = la;
  } else {
    if (ann_a.experience_rank == ann_b.experience_rank)
      throw Error(Errc::InvalidArgument, "annotators '" + ann_a.id + "' and '" + ann_b.id +
                                             "' share a rank; seniority is undefined");
    out.label = ann_a.experience_rank < ann_b.experience_rank ? la : lb;
    out.disagreement = true;
  }
  return out;
}

std::string_view to_string(Weighting w) noexcept {
  return w == Weighting::Linear ? "linear" : "unweighted";
}

std::optional<Weighting> parse_weighting(std::string_view text) noexcept {
  if (text == "linear") return Weighting::Linear;
  if (text == "unweighted" || text == "none") return Weighting::Unweighted;
  return std::nullopt;
}

std::uint64_t ContingencyTable::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

KappaResult cohen_kappa(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                        std::size_t categories, Weighting weighting) {
  if (pairs.empty()) throw Error(Errc::EmptyInput, "kappa needs at least one rated pair");
  if (categories == 0) throw Error(Errc::InvalidArgument, "kappa needs at least one category");

  KappaResult res;
  res.table.categories = categories;
  res.table.counts.assign(categories * categories, 0);
  std::vector<std::uint64_t> rows(categories, 0), cols(categories, 0);
  for (const auto& [x, y] : pairs) {
    if (x >= categories || y >= categories)
      throw Error(Errc::InvalidArgument, "category index out of range");
    ++res.table.counts[x * categories + y];
    ++rows[x];
    ++cols[y];
  }

  // Work in integer counts so that degenerate marginals are detected exactly.
  const auto n = static_cast<std::uint64_t>(pairs.size());
  const long double nn = static_cast<long double>(n) * static_cast<long double>(n);
  std::uint64_t agree = 0;
  long double chance = 0;  // sum_k rows_k * cols_k
  for (std::size_t k = 0; k < categories; ++k) {
    agree += res.table.at(k, k);
    chance += static_cast<long double>(rows[k]) * static_cast<long double>(cols[k]);
  }
  res.observed_agreement = static_cast<double>(static_cast<long double>(agree) / n);
  res.chance_agreement = static_cast<double>(chance / nn);

  if (chance == nn) {
    // both raters used one shared category, hence p_o = 1 too
    if (agree != n) throw Error(Errc::DegenerateMarginals, "chance agreement is 1 but p_o < 1");
    res.kappa = 1.0;
    return res;
  }

  if (weighting == Weighting::Unweighted) {
    const long double num = static_cast<long double>(n) * agree - chance;
    res.kappa = static_cast<double>(num / (nn - chance));
    return res;
  }

  long double observed_w = 0;  // sum |i-j| * O_ij
  long double expected_w = 0;  // sum |i-j| * rows_i * cols_j
  for (std::size_t i = 0; i < categories; ++i) {
    for (std::size_t j = 0; j < categories; ++j) {
      const long double w = i > j ? i - j : j - i;
      observed_w += w * res.table.at(i, j);
      expected_w += w * static_cast<long double>(rows[i]) * static_cast<long double>(cols[j]);
    }
  }
  if (expected_w == 0) {
    if (observed_w != 0)
      throw Error(Errc::DegenerateMarginals, "expected weighted disagreement is zero");
    res.kappa = 1.0;
    return res;
  }
  res.kappa = static_cast<double>(1.0L - static_cast<long double>(n) * observed_w / expected_w);
  return res;
}

std::vector<Judgment> KappaOptions::default_order() {
  return {Judgment::Negative, Judgment::Ambiguous, Judgment::Uncertain, Judgment::Neutral,
          Judgment::Positive};
}

std::vector<Judgment> effective_order(const KappaOptions& options) {
  std::vector<Judgment> order;
  for (Judgment j : options.order) {
    if (!options.include_borderline && j == Judgment::Uncertain) continue;
    if (std::find(order.begin(), order.end(), j) == order.end()) order.push_back(j);
  }
  return order;
}

KappaResult cohen_kappa(std::span<const std::pair<Judgment, Judgment>> pairs,
                        const KappaOptions& options) {
  const auto order = effective_order(options);
  auto index_of = [&](Judgment j) {
    auto it = std::find(order.begin(), order.end(), j);
    if (it == order.end())
      throw Error(Errc::InvalidArgument,
                  "judgment '" + std::string(to_string(j)) + "' is not in the category order");
    return static_cast<std::size_t>(it - order.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> indexed;
  indexed.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (!options.include_borderline && (a == Judgment::Uncertain || b == Judgment::Uncertain))
      continue;
    indexed.emplace_back(index_of(a), index_of(b));
  }
  if (indexed.empty())
    throw Error(Errc::EmptyInput, options.include_borderline || pairs.empty()
                                      ? "kappa needs at least one rated pair"
                                      : "no pairs left after excluding borderline items");
  return cohen_kappa(indexed, order.size(), options.weighting);
}

}  // namespace polarkit
