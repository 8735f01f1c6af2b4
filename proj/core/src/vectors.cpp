#include "polarkit/vectors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polarkit/error.hpp"

namespace polarkit {

void EmbeddingTable::put(std::string token, std::vector<double> vec) {
  if (vec.size() != dim_)
    throw Error(Errc::DimensionMismatch, "vector for '" + token + "' has " +
                                             std::to_string(vec.size()) + " values, expected " +
                                             std::to_string(dim_));
  vectors_.insert_or_assign(std::move(token), std::move(vec));
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
  auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<std::string> EmbeddingTable::tokens() const {
  std::vector<std::string> out;
  out.reserve(vectors_.size());
  for (const auto& [tok, vec] : vectors_) out.push_back(tok);
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingTable EmbeddingTable::scaled(double factor) const {
  EmbeddingTable out(dim_);
  for (const auto& [tok, vec] : vectors_) {
    std::vector<double> v(vec);
    for (double& x : v) x *= factor;
    out.vectors_.emplace(tok, std::move(v));
  }
  return out;
}

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

EmbeddingLoad read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MalformedHeader, "empty embedding file", 1);
  const auto head = fields(line);
  std::size_t count = 0, dim = 0;
  if (head.size() != 2 || !parse_number(head[0], count) || !parse_number(head[1], dim) || dim == 0)
    throw Error(Errc::MalformedHeader, "embedding header must be '<count> <dim>'", 1);

  EmbeddingLoad out{EmbeddingTable(dim), {}};
  std::size_t lineno = 1, rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.empty()) continue;
    if (f.size() != dim + 1)
      throw Error(Errc::DimensionMismatch,
                  "embedding line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                      " values, found " + std::to_string(f.size() - 1),
                  lineno);
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(f[k + 1], vec[k]) || !std::isfinite(vec[k]))
        throw Error(Errc::MalformedRow,
                    "embedding line " + std::to_string(lineno) + ": bad value '" +
                        std::string(f[k + 1]) + "'",
                    lineno);
    }
    std::string token(f[0]);
    if (out.table.find(token))
      out.warnings.push_back("embedding line " + std::to_string(lineno) + ": duplicate token '" +
                             token + "', keeping the last vector");
    out.table.put(std::move(token), std::move(vec));
    ++rows;
  }
  if (rows != count)
    throw Error(Errc::MalformedHeader, "embedding header announces " + std::to_string(count) +
                                           " rows but the file has " + std::to_string(rows),
                1);
  return out;
}

EmbeddingLoad load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open embedding file " + path.string());
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[32];
  for (const auto& tok : table.tokens()) {
    out << tok;
    for (double x : *table.find(tok)) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, p);
    }
    out << '\n';
  }
}

DocVector doc_vector(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  DocVector out{std::vector<double>(table.dim(), 0.0), 0};
  std::size_t found = 0;
  for (const auto& t : tokens) {
    const auto* v = table.find(t);
    if (!v) {
      ++out.oov_count;
      continue;
    }
    ++found;
    for (std::size_t k = 0; k < v->size(); ++k) out.values[k] += (*v)[k];
  }
  if (found > 0)
    for (double& x : out.values) x /= static_cast<double>(found);
  return out;
}

FeatureVector augment(const std::vector<double>& doc_vec, const std::vector<std::string>& tokens,
                      const PolarityMatcher& matcher, const AugmentOptions& options) {
  const PollScore s = matcher.score(tokens, PollingMode::UnigramPlusBigram);
  FeatureVector fv;
  fv.layout = FeatureVector::Layout::Augmented;
  fv.embedding_dim = doc_vec.size();
  fv.values = doc_vec;
  std::array<double, 4> tail = {static_cast<double>(s.unigrams.positive),
                                static_cast<double>(s.unigrams.negative),
                                static_cast<double>(s.bigrams.positive),
                                static_cast<double>(s.bigrams.negative)};
  if (options.length_normalize && !tokens.empty())
    for (double& x : tail) x /= static_cast<double>(tokens.size());
  fv.values.insert(fv.values.end(), tail.begin(), tail.end());
  return fv;
}

FeatureVector augment(const std::vector<double>& doc_vec, const std::vector<std::string>& tokens,
                      const Lexicon& uni, const Lexicon& bi, const AugmentOptions& options) {
  return augment(doc_vec, tokens, PolarityMatcher(uni, bi), options);
}

std::string_view to_string(FeatureSet fs) noexcept {
  switch (fs) {
    case FeatureSet::Plain: return "plain";
    case FeatureSet::PlusUnigram: return "plus_uni";
    case FeatureSet::PlusBigram: return "plus_bi";
    case FeatureSet::PlusBoth: return "plus_uni_bi";
  }
  return "plain";
}

std::optional<FeatureSet> parse_feature_set(std::string_view text) noexcept {
  for (auto fs : kAllFeatureSets)
    if (text == to_string(fs)) return fs;
  return std::nullopt;
}

std::vector<double> select_features(const FeatureVector& fv, FeatureSet set) {
  const std::size_t dim = fv.embedding_dim;
  std::vector<double> out(fv.values.begin(), fv.values.begin() + static_cast<std::ptrdiff_t>(dim));
  if (set == FeatureSet::Plain || fv.layout == FeatureVector::Layout::Plain) return out;
  const double* tail = fv.values.data() + dim;
  if (set == FeatureSet::PlusUnigram || set == FeatureSet::PlusBoth) {
    out.push_back(tail[0]);
    out.push_back(tail[1]);
  }
  if (set == FeatureSet::PlusBigram || set == FeatureSet::PlusBoth) {
    out.push_back(tail[2]);
    out.push_back(tail[3]);
  }
  return out;
}

void write_feature_matrix(const std::vector<FeatureRow>& rows, std::ostream& out) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().features.embedding_dim;
  out << "id\tlabel";
  for (std::size_t k = 0; k < dim; ++k) out << "\td" << k;
  for (auto name : kPolarityFeatureNames) out << '\t' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.id << '\t' << row.label;
    for (double x : row.features.values) {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(p - buf));
    }
    out << '\n';
  }
}

}  // namespace polarkit
