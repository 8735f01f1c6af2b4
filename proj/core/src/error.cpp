#include "polarkit/error.hpp"

namespace polarkit {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::MalformedRule: return "MalformedRule";
    case Errc::SameAnnotator: return "SameAnnotator";
    case Errc::UnknownAnnotator: return "UnknownAnnotator";
    case Errc::ItemMismatch: return "ItemMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DegenerateMarginals: return "DegenerateMarginals";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::DuplicateKey: return "DuplicateKey";
    case Errc::InvalidEntry: return "InvalidEntry";
    case Errc::InvalidThreshold: return "InvalidThreshold";
    case Errc::UnfilteredLexicon: return "UnfilteredLexicon";
    case Errc::EmptyTestSet: return "EmptyTestSet";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::SingleClassData: return "SingleClassData";
    case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
    case Errc::NonFiniteFeature: return "NonFiniteFeature";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::MalformedModel: return "MalformedModel";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::UnknownItem: return "UnknownItem";
    case Errc::Forbidden: return "Forbidden";
    case Errc::DuplicateSubmission: return "DuplicateSubmission";
    case Errc::NotReady: return "NotReady";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace polarkit
