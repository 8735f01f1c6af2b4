#include "polarkit/polling.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "polarkit/error.hpp"
#include "polarkit/extraction.hpp"

namespace polarkit {

std::string_view to_string(PollingMode mode) noexcept {
  switch (mode) {
    case PollingMode::Unigram: return "unigram";
    case PollingMode::Bigram: return "bigram";
    case PollingMode::UnigramPlusBigram: return "combined";
  }
  return "unigram";
}

std::optional<PollingMode> parse_polling_mode(std::string_view text) noexcept {
  if (text == "unigram" || text == "uni") return PollingMode::Unigram;
  if (text == "bigram" || text == "bi") return PollingMode::Bigram;
  if (text == "combined" || text == "uni+bi" || text == "unigram+bigram")
    return PollingMode::UnigramPlusBigram;
  return std::nullopt;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Positive: return "pos";
    case Verdict::Negative: return "neg";
    case Verdict::Unclassified: return "unclassified";
  }
  return "unclassified";
}

void PolarityMatcher::add(PatternSet& set, const LexiconEntry& entry,
                          const SegmentationRules* rules) {
  if (!is_polar(entry.label))
    throw Error(Errc::UnfilteredLexicon, "lexicon entry '" + entry.key() + "' is labeled '" +
                                             std::string(to_string(entry.label)) +
                                             "'; apply filter_polar first");
  const auto tokens = rules ? segment_stream(entry.ngram, *rules) : entry.ngram;
  auto& counts = set.patterns[ngram_key(tokens)];
  (entry.label == PolarityLabel::Positive ? counts.positive : counts.negative) += 1;
  if (std::find(set.lengths.begin(), set.lengths.end(), tokens.size()) == set.lengths.end()) {
    set.lengths.push_back(tokens.size());
    std::sort(set.lengths.begin(), set.lengths.end());
  }
}

PolarityMatcher::PolarityMatcher(const Lexicon& uni, const Lexicon& bi,
                                 const SegmentationRules* rules) {
  for (const auto& [key, e] : uni)
    if (e.ngram.size() == 1) add(uni_, e, rules);
  for (const auto& [key, e] : bi)
    if (e.ngram.size() == 2) add(bi_, e, rules);
}

MatchCounts PolarityMatcher::match(const PatternSet& set, const std::vector<std::string>& tokens) {
  MatchCounts out;
  if (set.patterns.empty()) return out;
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    key = tokens[i];
    std::size_t len = 1;
    for (std::size_t want : set.lengths) {
      if (i + want > tokens.size()) break;
      while (len < want) {
        key += ' ';
        key += tokens[i + len];
        ++len;
      }
      if (auto it = set.patterns.find(key); it != set.patterns.end()) {
        out.positive += it->second.positive;
        out.negative += it->second.negative;
      }
    }
  }
  return out;
}

PollScore PolarityMatcher::score(const std::vector<std::string>& tokens, PollingMode mode) const {
  PollScore s;
  if (mode != PollingMode::Bigram) s.unigrams = match(uni_, tokens);
  if (mode != PollingMode::Unigram) s.bigrams = match(bi_, tokens);
  s.score = static_cast<std::int64_t>(s.unigrams.positive + s.bigrams.positive) -
            static_cast<std::int64_t>(s.unigrams.negative + s.bigrams.negative);
  return s;
}

PollScore poll_score(const std::vector<std::string>& tokens, const Lexicon& uni,
                     const Lexicon& bi, PollingMode mode) {
  return PolarityMatcher(uni, bi).score(tokens, mode);
}

PollingReport evaluate_polling(const Corpus& corpus, const CorpusSplit* split,
                               const Lexicon& unigrams, const Lexicon& bigrams,
                               const PollingOptions& options) {
  if (options.segmentation && options.rules == nullptr)
    throw Error(Errc::InvalidArgument, "segmentation requested without segmentation rules");
  EvalScope scope = options.scope;
  if (scope == EvalScope::Auto)
    scope = options.mode == PollingMode::Unigram ? EvalScope::FullCorpus : EvalScope::TestSplit;
  if (options.mode != PollingMode::Unigram && split == nullptr)
    throw Error(Errc::InvalidArgument, "bigram polling needs a train/test split");
  if (scope == EvalScope::TestSplit && split == nullptr)
    throw Error(Errc::InvalidArgument, "test-split evaluation needs a train/test split");

  const SegmentationRules* rules = options.segmentation ? options.rules : nullptr;
  const PolarityMatcher matcher(unigrams, bigrams, rules);

  PollingReport report;
  report.mode = options.mode;
  report.segmentation = options.segmentation;
  report.column = options.column;
  for (const Review& r : corpus.reviews()) {
    if (scope == EvalScope::TestSplit && !split->in_test(r.id)) continue;
    auto tokens = tokenize(r.text);
    if (rules) tokens = segment_stream(tokens, *rules);
    PollingVerdict v{r.id, r.gold, matcher.score(tokens, options.mode)};
    auto& tally = report.per_domain[r.domain];
    ++tally.total;
    ++report.total;
    const Verdict verdict = v.verdict();
    if (verdict == Verdict::Unclassified) {
      ++report.unclassified;
    } else {
      ++tally.classified;
      const bool right = (verdict == Verdict::Positive) == (r.gold == Sentiment::Positive);
      if (right) {
        ++tally.correct;
        ++report.correct;
      }
    }
    report.verdicts.push_back(std::move(v));
  }
  if (report.total == 0) throw Error(Errc::EmptyTestSet, "no reviews to evaluate");
  if (report.classified() > 0)
    report.accuracy_pct = 100.0 * static_cast<double>(report.correct) /
                          static_cast<double>(report.classified());
  return report;
}

Lexicon training_bigram_lexicon(const Corpus& corpus, const CorpusSplit& split,
                                const Lexicon& bigram_lexicon, std::uint64_t min_count) {
  const auto streams = corpus_streams(corpus, ExtractionScope::TrainSplit, &split);
  const auto candidates = threshold_bigrams(count_bigrams(streams), min_count);
  return filter_polar(restrict_to_candidates(bigram_lexicon, candidates));
}

std::vector<std::string> default_polling_columns() {
  return {"SentiWordNet", "Our resource", "Bigram", "Uni+Bigrams"};
}

namespace {

std::string format_accuracy(const std::optional<double>& pct) {
  if (!pct) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *pct);
  return buf;
}

}  // namespace

void emit_polling_table(const std::vector<PollingReport>& reports, std::ostream& out,
                        const std::vector<std::string>& columns) {
  constexpr std::string_view kMissing = "—";
  auto find = [&](const std::string& column, bool segmented) -> const PollingReport* {
    for (const auto& r : reports)
      if (r.column == column && r.segmentation == segmented) return &r;
    return nullptr;
  };
  for (const auto& c : columns) out << '\t' << c;
  out << '\n';
  for (bool segmented : {false, true}) {
    out << (segmented ? "After Segmentation" : "Before Segmentation");
    for (const auto& c : columns) {
      const auto* r = find(c, segmented);
      out << '\t';
      if (r) out << format_accuracy(r->accuracy_pct);
      else out << kMissing;
    }
    out << "\nUnclassified reviews";
    for (const auto& c : columns) {
      const auto* r = find(c, segmented);
      out << '\t';
      if (r) out << r->unclassified << '/' << r->total;
      else out << kMissing;
    }
    out << '\n';
  }
}

void write_verdicts(const PollingReport& report, std::ostream& out) {
  out << "id\tgold\tscore\tverdict\tpos_uni\tneg_uni\tpos_bi\tneg_bi\n";
  for (const auto& v : report.verdicts)
    out << v.review_id << '\t' << to_string(v.gold) << '\t' << v.score.score << '\t'
        << to_string(v.verdict()) << '\t' << v.score.unigrams.positive << '\t'
        << v.score.unigrams.negative << '\t' << v.score.bigrams.positive << '\t'
        << v.score.bigrams.negative << '\n';
}

}  // namespace polarkit
