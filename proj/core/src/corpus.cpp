#include "polarkit/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "polarkit/error.hpp"
#include "polarkit/random.hpp"

namespace polarkit {

std::string_view to_string(Sentiment s) noexcept {
  return s == Sentiment::Positive ? "pos" : "neg";
}

std::string_view to_string(Domain d) noexcept {
  switch (d) {
    case Domain::Movie: return "movie";
    case Domain::Product: return "product";
    case Domain::Book: return "book";
    case Domain::Other: return "other";
  }
  return "other";
}

std::optional<Domain> parse_domain(std::string_view text) noexcept {
  if (text == "movie") return Domain::Movie;
  if (text == "product") return Domain::Product;
  if (text == "book") return Domain::Book;
  if (text == "other") return Domain::Other;
  return std::nullopt;
}

std::optional<Sentiment> parse_sentiment(std::string_view text) noexcept {
  if (text == "pos") return Sentiment::Positive;
  if (text == "neg") return Sentiment::Negative;
  return std::nullopt;
}

Corpus::Corpus(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
  std::set<std::string_view> seen;
  label_counts_[Sentiment::Positive] = 0;
  label_counts_[Sentiment::Negative] = 0;
  for (std::size_t i = 0; i < reviews_.size(); ++i) {
    const Review& r = reviews_[i];
    if (r.id.empty()) throw Error(Errc::MalformedRecord, "review id must be non-empty", i + 1);
    if (r.text.empty())
      throw Error(Errc::MalformedRecord, "review '" + r.id + "' has empty text", i + 1);
    if (!seen.insert(r.id).second)
      throw Error(Errc::DuplicateId, "duplicate review id '" + r.id + "'", i + 1);
    ++label_counts_[r.gold];
  }
}

std::size_t Corpus::count(Sentiment s) const noexcept {
  auto it = label_counts_.find(s);
  return it == label_counts_.end() ? 0 : it->second;
}

const Review* Corpus::find(std::string_view id) const {
  auto it = std::find_if(reviews_.begin(), reviews_.end(),
                         [&](const Review& r) { return r.id == id; });
  return it == reviews_.end() ? nullptr : &*it;
}

namespace {

std::string required_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw Error(Errc::MalformedRecord,
                "line " + std::to_string(line) + ": missing or non-string field '" + key + "'",
                line);
  return it->get<std::string>();
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Corpus read_corpus(std::istream& in) {
  std::vector<Review> reviews;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::MalformedRecord,
                  "line " + std::to_string(lineno) + ": invalid JSON: " + e.what(), lineno);
    }
    if (!obj.is_object())
      throw Error(Errc::MalformedRecord,
                  "line " + std::to_string(lineno) + ": expected a JSON object", lineno);
    Review r;
    r.id = required_string(obj, "id", lineno);
    const auto domain = required_string(obj, "domain", lineno);
    r.text = required_string(obj, "text", lineno);
    const auto label = required_string(obj, "label", lineno);
    auto d = parse_domain(domain);
    if (!d)
      throw Error(Errc::MalformedRecord,
                  "line " + std::to_string(lineno) + ": unknown domain '" + domain + "'", lineno);
    auto s = parse_sentiment(label);
    if (!s)
      throw Error(Errc::MalformedRecord,
                  "line " + std::to_string(lineno) + ": unknown label '" + label + "'", lineno);
    if (r.id.empty() || r.text.empty())
      throw Error(Errc::MalformedRecord,
                  "line " + std::to_string(lineno) + ": id and text must be non-empty", lineno);
    if (!ids.insert(r.id).second)
      throw Error(Errc::DuplicateId, "line " + std::to_string(lineno) + ": duplicate id '" + r.id + "'",
                  lineno);
    r.domain = *d;
    r.gold = *s;
    reviews.push_back(std::move(r));
  }
  return Corpus(std::move(reviews));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open corpus file " + path.string());
  return read_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Review& r : corpus.reviews()) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["domain"] = to_string(r.domain);
    obj["text"] = r.text;
    obj["label"] = to_string(r.gold);
    out << obj.dump() << '\n';
  }
}

namespace {

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(text);
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) return std::string(text);
  std::string out;
  dst.toUTF8String(out);
  return out;
}

struct CodePoint {
  std::size_t begin;
  std::size_t end;
  UChar32 value;
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  const std::string normalized = nfc(text);
  const auto* bytes = reinterpret_cast<const uint8_t*>(normalized.data());
  const auto length = static_cast<int32_t>(normalized.size());

  std::vector<std::string> tokens;
  std::vector<CodePoint> run;
  auto flush = [&] {
    std::size_t lo = 0, hi = run.size();
    while (lo < hi && u_ispunct(run[lo].value)) ++lo;
    while (hi > lo && u_ispunct(run[hi - 1].value)) --hi;
    if (lo < hi) tokens.emplace_back(normalized.substr(run[lo].begin, run[hi - 1].end - run[lo].begin));
    run.clear();
  };

  int32_t i = 0;
  while (i < length) {
    const auto begin = static_cast<std::size_t>(i);
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;  // ill-formed byte sequence, kept as part of the token
    if (u_isUWhiteSpace(c)) {
      flush();
    } else {
      run.push_back({begin, static_cast<std::size_t>(i), c});
    }
  }
  flush();
  return tokens;
}

std::size_t SplitRatio::train_size(std::size_t n) const noexcept {
  const std::uint64_t total = std::uint64_t{train} + test;
  return static_cast<std::size_t>((std::uint64_t{n} * train + total - 1) / total);
}

std::optional<SplitRatio> parse_split_ratio(std::string_view text) {
  auto parse_uint = [](std::string_view s) -> std::optional<std::uint32_t> {
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
  };
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    auto a = parse_uint(text.substr(0, colon));
    auto b = parse_uint(text.substr(colon + 1));
    if (!a || !b || *a == 0 || *b == 0) return std::nullopt;
    return SplitRatio{*a, *b};
  }
  // decimal fraction "0.d+"
  if (!text.starts_with("0.") || text.size() < 3 || text.size() > 11) return std::nullopt;
  auto digits = text.substr(2);
  auto num = parse_uint(digits);
  if (!num || *num == 0) return std::nullopt;
  std::uint32_t den = 1;
  for (std::size_t k = 0; k < digits.size(); ++k) den *= 10;
  const std::uint32_t g = std::gcd(*num, den);
  return SplitRatio{*num / g, (den - *num) / g};
}

CorpusSplit split_corpus(const Corpus& corpus, SplitRatio ratio, std::uint64_t seed,
                         bool stratified) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot split an empty corpus");
  if (ratio.train == 0 || ratio.test == 0)
    throw Error(Errc::InvalidArgument, "split ratio must lie strictly between 0 and 1");

  CorpusSplit split;
  split.ratio = ratio;
  split.seed = seed;
  split.stratified = stratified;

  Rng rng(seed);
  const std::uint64_t total = std::uint64_t{ratio.train} + ratio.test;

  std::vector<std::vector<std::size_t>> strata;
  if (stratified) {
    for (Sentiment s : {Sentiment::Positive, Sentiment::Negative}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < corpus.size(); ++i)
        if (corpus.reviews()[i].gold == s) idx.push_back(i);
      strata.push_back(std::move(idx));
    }
  } else {
    std::vector<std::size_t> idx(corpus.size());
    std::iota(idx.begin(), idx.end(), 0);
    strata.push_back(std::move(idx));
  }

  // floor per stratum, leftover by largest fractional remainder
  std::vector<std::size_t> take(strata.size());
  std::vector<std::uint64_t> remainder(strata.size());
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const std::uint64_t scaled = std::uint64_t{strata[s].size()} * ratio.train;
    take[s] = static_cast<std::size_t>(scaled / total);
    remainder[s] = scaled % total;
    assigned += take[s];
  }
  std::size_t leftover = ratio.train_size(corpus.size()) - assigned;
  std::vector<std::size_t> order(strata.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t s : order) {
    if (leftover == 0) break;
    if (remainder[s] == 0) continue;
    ++take[s];
    --leftover;
  }

  for (std::size_t s = 0; s < strata.size(); ++s) {
    auto& idx = strata[s];
    rng.shuffle(std::span<std::size_t>(idx));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::string& id = corpus.reviews()[idx[k]].id;
      (k < take[s] ? split.train_ids : split.test_ids).insert(id);
    }
  }
  return split;
}

std::vector<const Review*> select(const Corpus& corpus, const std::set<std::string>& ids) {
  std::vector<const Review*> out;
  for (const Review& r : corpus.reviews())
    if (ids.contains(r.id)) out.push_back(&r);
  return out;
}

}  // namespace polarkit
