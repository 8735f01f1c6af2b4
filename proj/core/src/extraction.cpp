#include "polarkit/extraction.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <utility>

#include "polarkit/error.hpp"

namespace polarkit {

std::uint64_t BigramCounts::total() const {
  std::uint64_t t = 0;
  for (const auto& [bg, c] : counts) t += c;
  return t;
}

BigramCounts count_bigrams(const std::vector<std::vector<std::string>>& token_streams) {
  BigramCounts out;
  for (const auto& stream : token_streams)
    for (std::size_t i = 1; i < stream.size(); ++i) ++out.counts[{stream[i - 1], stream[i]}];
  return out;
}

std::vector<BigramCandidate> threshold_bigrams(const BigramCounts& counts,
                                               std::uint64_t min_count) {
  if (min_count < 1) throw Error(Errc::InvalidThreshold, "min_count must be at least 1");
  std::vector<BigramCandidate> out;
  for (const auto& [bg, c] : counts.counts)
    if (c >= min_count) out.push_back({bg.first, bg.second, c, std::nullopt});
  std::stable_sort(out.begin(), out.end(), [](const BigramCandidate& a, const BigramCandidate& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key() < b.key();
  });
  return out;
}

void write_candidates(const std::vector<BigramCandidate>& candidates, std::ostream& out) {
  out << "ngram\tcount\n";
  for (const auto& c : candidates) out << c.key() << '\t' << c.count << '\n';
}

void export_candidates(const std::vector<BigramCandidate>& candidates,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write candidate file " + path.string());
  write_candidates(candidates, out);
  out.flush();
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

std::vector<BigramCandidate> read_candidates(std::istream& in) {
  std::vector<BigramCandidate> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.starts_with('#')) continue;
    if (std::exchange(header_allowed, false) && line.starts_with("ngram\t")) continue;
    auto malformed = [&](const std::string& why) {
      return Error(Errc::MalformedRow, "candidate line " + std::to_string(lineno) + ": " + why,
                   lineno);
    };
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw malformed("expected ngram<TAB>count");
    const std::string key = line.substr(0, tab);
    std::string rest = line.substr(tab + 1);
    std::optional<std::string> gloss;
    if (auto tab2 = rest.find('\t'); tab2 != std::string::npos) {
      gloss = rest.substr(tab2 + 1);
      rest.resize(tab2);
    }
    std::uint64_t count = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), count);
    if (ec != std::errc{} || p != rest.data() + rest.size()) throw malformed("bad count");
    const auto parts = split_key(key);
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
      throw malformed("ngram must be two space-separated tokens");
    if (!seen.insert(key).second) throw malformed("duplicate ngram '" + key + "'");
    if (gloss && gloss->empty()) gloss.reset();
    out.push_back({parts[0], parts[1], count, std::move(gloss)});
  }
  return out;
}

std::vector<BigramCandidate> load_candidates(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open candidate file " + path.string());
  return read_candidates(in);
}

std::vector<std::vector<std::string>> corpus_streams(const Corpus& corpus, ExtractionScope scope,
                                                     const CorpusSplit* split,
                                                     const SegmentationRules* rules) {
  if (scope == ExtractionScope::TrainSplit && split == nullptr)
    throw Error(Errc::InvalidArgument, "train-split extraction requires a corpus split");
  std::vector<std::vector<std::string>> out;
  for (const Review& r : corpus.reviews()) {
    if (scope == ExtractionScope::TrainSplit && !split->in_train(r.id)) continue;
    auto tokens = tokenize(r.text);
    if (rules) tokens = segment_stream(tokens, *rules);
    out.push_back(std::move(tokens));
  }
  return out;
}

Lexicon restrict_to_candidates(const Lexicon& bigrams,
                               const std::vector<BigramCandidate>& candidates) {
  Lexicon out;
  for (const auto& c : candidates)
    if (const auto* e = bigrams.find(c.key()); e && e->ngram.size() == 2) out.put(*e);
  return out;
}

}  // namespace polarkit
