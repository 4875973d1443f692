#pragma once

#include <vector>

#include "pindelay/graph.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

/// Characteristic quasipolynomial of the delayed pinned network,
///   chi(lambda) = det(lambda I + K - A e^{-lambda tau_r}
///                     + c D e^{-lambda tau_p}),
/// whose roots' real parts give decay/growth rates.
struct QuasiPoly {
  Vector K;       // in-degree diagonal
  Matrix A;       // coupling weights
  Vector d;       // 0/1 pin indicator (may be all zero)
  double c = 0.0;
  double tau_r = 0.0;
  double tau_p = 0.0;

  static QuasiPoly from_problem(const PinningProblem& p);
  /// Reduced block dynamics (no pinning term): det(mu I + K2 - A22 e^{-mu tau_r}).
  static QuasiPoly reduced(Vector K2, Matrix A22, double tau_r);

  int size() const { return static_cast<int>(K.size()); }
  ComplexMatrix matrix_at(Complex lambda) const;     // M(lambda)
  ComplexMatrix derivative_at(Complex lambda) const; // M'(lambda)
};

Complex chi(const QuasiPoly& qp, Complex lambda);

/// chi'(lambda)/chi(lambda) = trace(M(lambda)^{-1} M'(lambda)); the Newton
/// update for det-based root finding without forming the determinant.
/// Throws SingularAtPoint if M(lambda) is numerically singular.
Complex chi_log_derivative(const QuasiPoly& qp, Complex lambda);

/// |det| relative to the product of row norms (capped below at 1), a
/// scale-free closeness-to-singularity measure usable at any dimension.
double chi_relative_residual(const QuasiPoly& qp, Complex lambda);

/// Right half border: Gershgorin-type bound beyond which no root exists.
struct RootSearchRegion {
  double sigma_lo = -1.0;
  double sigma_hi = 1.0;
  double omega_max = 1.0;
  static RootSearchRegion defaults_for(const QuasiPoly& qp);
};

struct RootSearchOptions {
  int grid = 60;             // seeds per axis at the first refinement level
  int max_refinements = 2;   // further levels double the density
  int required_agreements = 2;
  bool seed_undelayed_eigenvalues = true;
  int max_newton_iter = 60;
};

struct CharRoot {
  Complex lambda{0.0, 0.0};
  double residual = 0.0;      // chi_relative_residual at lambda
  double residual_raw = 0.0;  // |chi(lambda)|
  int multiplicity_hint = 1;  // merged Newton basins
};

/// All distinct converged roots with Im >= 0 (conjugates implied), sorted by
/// descending real part. Deterministic for fixed inputs at any parallelism.
std::vector<CharRoot> find_roots(const QuasiPoly& qp,
                                 const RootSearchRegion& region,
                                 const RootSearchOptions& opts = {});

/// Root with the largest real part. Refines the seeding grid until the
/// answer repeats (required_agreements times within 1e-8) or refinements are
/// exhausted. Throws NoRootFound if nothing converges.
CharRoot dominant_root(const QuasiPoly& qp);
CharRoot dominant_root(const QuasiPoly& qp, const RootSearchRegion& region,
                       const RootSearchOptions& opts);

/// Stable iff Re < -1e-8, unstable iff Re > 1e-8, inconclusive in between.
StabilityVerdict verdict_from_root(const CharRoot& root);

}  // namespace pindelay
