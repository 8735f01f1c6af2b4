#include "polarkit/segmenter.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include <unicode/utf8.h>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

std::size_t code_points(std::string_view s) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  std::size_t n = 0;
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    ++n;
  }
  return n;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Returns the stem length in bytes, or npos when no rule applies.
std::size_t strip_once(std::string_view token, const SegmentationRules& rules) {
  for (const SuffixRule& rule : rules.rules) {
    if (rule.suffix.size() >= token.size() || !token.ends_with(rule.suffix)) continue;
    const auto stem = token.substr(0, token.size() - rule.suffix.size());
    // a suffix that splits a multi-byte sequence is not a match
    if (!U8_IS_SINGLE(static_cast<uint8_t>(rule.suffix.front())) &&
        !U8_IS_LEAD(static_cast<uint8_t>(rule.suffix.front())))
      continue;
    if (code_points(stem) < rule.min_stem_length) continue;
    return stem.size();
  }
  return std::string_view::npos;
}

}  // namespace

SegmentationRules read_rules(std::istream& in) {
  SegmentationRules out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos)
      throw Error(Errc::MalformedRule,
                  "rules line " + std::to_string(lineno) + ": expected suffix<TAB>min_stem_length",
                  lineno);
    const auto suffix = trim(view.substr(0, tab));
    const auto len_text = trim(view.substr(tab + 1));
    std::size_t min_stem = 0;
    auto [p, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), min_stem);
    if (suffix.empty() || ec != std::errc{} || p != len_text.data() + len_text.size() || min_stem == 0)
      throw Error(Errc::MalformedRule,
                  "rules line " + std::to_string(lineno) +
                      ": suffix must be non-empty and min_stem_length a positive integer",
                  lineno);
    out.rules.push_back({std::string(suffix), min_stem});
  }
  return out;
}

SegmentationRules load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open rules file " + path.string());
  return read_rules(in);
}

std::vector<std::string> segment_token(std::string_view token, const SegmentationRules& rules) {
  std::vector<std::string> suffixes;
  std::string_view stem = token;
  while (!stem.empty()) {
    const auto cut = strip_once(stem, rules);
    if (cut == std::string_view::npos) break;
    suffixes.emplace_back(stem.substr(cut));
    stem = stem.substr(0, cut);
    if (!rules.recursive) break;
  }
  std::vector<std::string> out;
  out.reserve(suffixes.size() + 1);
  out.emplace_back(stem);
  out.insert(out.end(), std::make_move_iterator(suffixes.rbegin()),
             std::make_move_iterator(suffixes.rend()));
  return out;
}

std::vector<std::string> segment_stream(const std::vector<std::string>& tokens,
                                        const SegmentationRules& rules) {
  if (rules.empty()) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (token.empty()) continue;
    auto parts = segment_token(token, rules);
    out.insert(out.end(), std::make_move_iterator(parts.begin()),
               std::make_move_iterator(parts.end()));
  }
  return out;
}

}  // namespace polarkit
