#include "nlsprop/errors.hpp"

namespace nlsprop {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::MeshOverflow: return "MeshOverflow";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::SpanMismatch: return "SpanMismatch";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::MaxEvaluations: return "MaxEvaluations";
    case ErrorKind::NotGroundState: return "NotGroundState";
    case ErrorKind::SectorMismatch: return "SectorMismatch";
    case ErrorKind::WrongBranch: return "WrongBranch";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::Uncertified: return "Uncertified";
    case ErrorKind::MonotonicityViolated: return "MonotonicityViolated";
    case ErrorKind::NearSingularOperator: return "NearSingularOperator";
    case ErrorKind::UnknownSector: return "UnknownSector";
    case ErrorKind::IndexExceedsDirections: return "IndexExceedsDirections";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace nlsprop
