#include "pindelay/types.hpp"

namespace pindelay {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::EmptyPinSet: return "EmptyPinSet";
    case ErrorCode::AllPinned: return "AllPinned";
    case ErrorCode::NotStronglyConnected: return "NotStronglyConnected";
    case ErrorCode::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::DegenerateNorm: return "DegenerateNorm";
    case ErrorCode::SingularAtPoint: return "SingularAtPoint";
    case ErrorCode::NoRootFound: return "NoRootFound";
    case ErrorCode::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace pindelay
