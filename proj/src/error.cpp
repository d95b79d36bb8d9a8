#include "noir/error.hpp"

namespace noir {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::EdgeFromOutlet: return "EdgeFromOutlet";
    case ErrorCode::EdgeToInlet: return "EdgeToInlet";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::MissingProbability: return "MissingProbability";
    case ErrorCode::NormalizationViolated: return "NormalizationViolated";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::UnknownAction: return "UnknownAction";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InfeasibleBox: return "InfeasibleBox";
    case ErrorCode::NonContiguousStep: return "NonContiguousStep";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::QpInfeasibleNoFallback: return "QpInfeasibleNoFallback";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
  }
  return "UnknownError";
}

}  // namespace noir
