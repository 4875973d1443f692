#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pindelay {

inline constexpr const char* kToolVersion = "0.1.0";

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ErrorCode {
  InvalidArgument,
  ParseFailure,
  EmptyPinSet,
  AllPinned,
  NotStronglyConnected,
  NonDiagonalizable,
  ComplexSpectrum,
  NotNormalized,
  StepTooLarge,
  DegenerateNorm,
  SingularAtPoint,
  NoRootFound,
  NonConvergence,
};

const char* to_string(ErrorCode code);

/// Every failure raised by this library. `code()` distinguishes misuse
/// (bad inputs, violated preconditions) from numerical breakdown; see
/// `is_numerical()`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for convergence/degeneracy failures that depend on the data rather
  /// than on how the call was formed.
  bool is_numerical() const noexcept {
    switch (code_) {
      case ErrorCode::DegenerateNorm:
      case ErrorCode::SingularAtPoint:
      case ErrorCode::NoRootFound:
      case ErrorCode::NonConvergence:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorCode code_;
};

enum class Verdict { Stable, Unstable, Inconclusive };

const char* to_string(Verdict verdict);

struct StabilityVerdict {
  Verdict verdict = Verdict::Inconclusive;
  Complex dominant{0.0, 0.0};  // root (or surrogate) that decided it
  std::string method;
};

}  // namespace pindelay
