#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polarkit {

struct SuffixRule {
  std::string suffix;
  /// Minimum stem length in code points left after stripping.
  std::size_t min_stem_length = 1;

  friend bool operator==(const SuffixRule&, const SuffixRule&) = default;
};

/// Ordered suffix-stripping rules. The first rule in listed order whose
/// suffix matches and whose stem guard holds is applied.
struct SegmentationRules {
  std::vector<SuffixRule> rules;
  /// Keep stripping from the remaining stem until no rule applies.
  bool recursive = false;

  bool empty() const noexcept { return rules.empty(); }
};

/// TSV: suffix <TAB> min_stem_length; '#' starts a comment line.
SegmentationRules load_rules(const std::filesystem::path& path);
SegmentationRules read_rules(std::istream& in);

/// Splits `token` into stem followed by stripped suffixes. Concatenating the
/// result always reproduces `token`.
std::vector<std::string> segment_token(std::string_view token, const SegmentationRules& rules);

std::vector<std::string> segment_stream(const std::vector<std::string>& tokens,
                                        const SegmentationRules& rules);

}  // namespace polarkit
