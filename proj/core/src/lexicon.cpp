#include "polarkit/lexicon.hpp"

#include <fstream>
#include <ostream>

#include "polarkit/error.hpp"

namespace polarkit {

std::string_view to_string(PolarityLabel label) noexcept {
  switch (label) {
    case PolarityLabel::Positive: return "pos";
    case PolarityLabel::Negative: return "neg";
    case PolarityLabel::Neutral: return "neu";
    case PolarityLabel::Ambiguous: return "amb";
  }
  return "neu";
}

std::optional<PolarityLabel> parse_label(std::string_view text) noexcept {
  for (auto label : kAllLabels)
    if (text == to_string(label)) return label;
  return std::nullopt;
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::SentiWordNet: return "sentiwordnet";
    case Provenance::OntoSenseNet: return "ontosensenet";
    case Provenance::BigramExtraction: return "bigram_extraction";
    case Provenance::Manual: return "manual";
  }
  return "manual";
}

std::optional<Provenance> parse_provenance(std::string_view text) noexcept {
  for (auto p : {Provenance::SentiWordNet, Provenance::OntoSenseNet, Provenance::BigramExtraction,
                 Provenance::Manual})
    if (text == to_string(p)) return p;
  return std::nullopt;
}

std::string ngram_key(const std::vector<std::string>& tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key += ' ';
    key += tokens[i];
  }
  return key;
}

std::vector<std::string> split_key(std::string_view key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto sp = key.find(' ', start);
    out.emplace_back(key.substr(start, sp - start));
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return out;
}

std::string LexiconEntry::key() const { return ngram_key(ngram); }

void Lexicon::validate(LexiconEntry& entry) {
  if (entry.ngram.empty() || entry.ngram.size() > 2)
    throw Error(Errc::InvalidEntry, "lexicon n-gram must have 1 or 2 tokens");
  for (const auto& t : entry.ngram)
    if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos)
      throw Error(Errc::InvalidEntry, "lexicon token '" + t + "' is empty or contains whitespace");
  if (entry.gloss && entry.gloss->empty()) entry.gloss.reset();
}

void Lexicon::add(LexiconEntry entry) {
  validate(entry);
  auto key = entry.key();
  if (entries_.contains(key)) throw Error(Errc::DuplicateKey, "duplicate lexicon key '" + key + "'");
  entries_.emplace(std::move(key), std::move(entry));
}

void Lexicon::put(LexiconEntry entry) {
  validate(entry);
  auto key = entry.key();
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

const LexiconEntry* Lexicon::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::polar() const {
  for (const auto& [key, e] : entries_)
    if (!is_polar(e.label)) return false;
  return true;
}

Lexicon Lexicon::unigrams() const {
  Lexicon out;
  for (const auto& [key, e] : entries_)
    if (e.ngram.size() == 1) out.entries_.emplace(key, e);
  return out;
}

Lexicon Lexicon::bigrams() const {
  Lexicon out;
  for (const auto& [key, e] : entries_)
    if (e.ngram.size() == 2) out.entries_.emplace(key, e);
  return out;
}

Lexicon filter_polar(const Lexicon& lexicon) {
  Lexicon out;
  for (const auto& [key, e] : lexicon)
    if (is_polar(e.label)) out.put(e);
  return out;
}

std::size_t LabelDistribution::count(PolarityLabel label) const noexcept {
  switch (label) {
    case PolarityLabel::Positive: return positive;
    case PolarityLabel::Negative: return negative;
    case PolarityLabel::Neutral: return neutral;
    case PolarityLabel::Ambiguous: return ambiguous;
  }
  return 0;
}

LabelDistribution lexicon_stats(const Lexicon& lexicon) {
  LabelDistribution d;
  for (const auto& [key, e] : lexicon) {
    switch (e.label) {
      case PolarityLabel::Positive: ++d.positive; break;
      case PolarityLabel::Negative: ++d.negative; break;
      case PolarityLabel::Neutral: ++d.neutral; break;
      case PolarityLabel::Ambiguous: ++d.ambiguous; break;
    }
  }
  return d;
}

void write_stats_table(std::ostream& out,
                       const std::vector<std::pair<std::string, LabelDistribution>>& rows) {
  out << "Resource\tPositive\tNegative\tNeutral\tAmbiguous\tTotal\n";
  for (const auto& [name, d] : rows)
    out << name << '\t' << d.positive << '\t' << d.negative << '\t' << d.neutral << '\t'
        << d.ambiguous << '\t' << d.total() << '\n';
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) return std::nullopt;
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: return std::nullopt;
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

}  // namespace

Lexicon read_lexicon(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kLexiconHeader || line == "ngram\tlabel\tprovenance") continue;
    }
    auto malformed = [&](const std::string& why) {
      return Error(Errc::MalformedRow, "lexicon line " + std::to_string(lineno) + ": " + why, lineno);
    };
    const auto cols = split_tabs(line);
    if (cols.size() < 3 || cols.size() > 4) throw malformed("expected 3 or 4 tab-separated columns");
    auto label = parse_label(cols[1]);
    if (!label)
      throw Error(Errc::UnknownLabel,
                  "lexicon line " + std::to_string(lineno) + ": unknown label '" +
                      std::string(cols[1]) + "'",
                  lineno);
    auto prov = parse_provenance(cols[2]);
    if (!prov) throw malformed("unknown provenance '" + std::string(cols[2]) + "'");
    LexiconEntry entry;
    entry.ngram = split_key(cols[0]);
    entry.label = *label;
    entry.provenance = *prov;
    if (cols.size() == 4) {
      auto gloss = unescape(cols[3]);
      if (!gloss) throw malformed("bad escape sequence in gloss");
      entry.gloss = std::move(*gloss);
    }
    try {
      lex.add(std::move(entry));
    } catch (const Error& e) {
      throw Error(e.code(), "lexicon line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open lexicon file " + path.string());
  return read_lexicon(in);
}

void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  out << kLexiconHeader << '\n';
  for (const auto& [key, e] : lexicon) {
    out << key << '\t' << to_string(e.label) << '\t' << to_string(e.provenance);
    if (e.gloss) out << '\t' << escape(*e.gloss);
    out << '\n';
  }
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write lexicon file " + path.string());
  write_lexicon(lexicon, out);
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

}  // namespace polarkit
