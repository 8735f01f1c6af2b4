#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polarkit {

enum class Errc {
  // corpus
  MalformedRecord,
  DuplicateId,
  EmptyCorpus,
  // segmenter
  MalformedRule,
  // lexicon
  SameAnnotator,
  UnknownAnnotator,
  ItemMismatch,
  EmptyInput,
  DegenerateMarginals,
  MalformedRow,
  UnknownLabel,
  DuplicateKey,
  InvalidEntry,
  // extraction
  InvalidThreshold,
  // polling
  UnfilteredLexicon,
  EmptyTestSet,
  // vectors
  DimensionMismatch,
  MalformedHeader,
  // classifiers
  SingleClassData,
  InvalidHyperparameter,
  NonFiniteFeature,
  EmptyDataset,
  MalformedModel,
  // annotation service
  UnknownTask,
  UnknownItem,
  Forbidden,
  DuplicateSubmission,
  NotReady,
  // shared
  InvalidArgument,
  IoFailure,
};

std::string_view errc_name(Errc code) noexcept;

/// The single exception type thrown by the library. `code()` identifies the
/// failure; `line()` is the 1-based input line when the error came from a
/// file parser, 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Errc code_;
  std::size_t line_;
};

}  // namespace polarkit
