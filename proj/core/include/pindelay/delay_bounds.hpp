#pragma once

#include <vector>

#include "pindelay/spectral.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

enum class BoundKind { TauPStar, TauPM, LambertVerdict };

/// One admissible-delay bound together with method-specific diagnostics.
/// Fields outside the block matching `kind` keep their defaults.
struct BoundResult {
  BoundKind kind = BoundKind::TauPStar;
  /// The delay bound (time units). Infinity with capped=true when the scan
  /// found no instability below the cap.
  double value = 0.0;

  // TauPStar
  bool capped = false;
  double omega_star = 0.0;  // frequency minimizing F at the boundary
  double min_f = 0.0;       // that minimum, evaluated just below the bound
  double tau_cap = 0.0;     // scan ceiling that was in effect

  // TauPM
  std::vector<double> per_node_values;   // first-crossing delay per pin choice
  int deciding_node = -1;                // argmin of per_node_values
  std::vector<double> crossing_omegas;   // deciding node's crossing frequencies
  /// Delay from the closed-form recipe (largest crossing frequency of the
  /// consensus-mode weights, arccos form). Kept as a diagnostic; `value` is
  /// the guaranteed bound.
  double formula_value = 0.0;
  bool formula_differs = false;
  bool negative_products = false;  // some mode weight was negative

  // LambertVerdict (populated by the cli wrapper, not by the core test)
  StabilityVerdict verdict{};
  std::vector<Complex> s_roots;
};

/// F(omega) = c^2 + omega^2 + 2c [l cos(omega tau) - omega sin(omega tau)].
/// Strict positivity of F over all frequencies rules out imaginary-axis
/// characteristic roots touching the Gershgorin disc of a pinned node with
/// in-degree l, which is what makes tau_p_star a certificate.
double F_value(double omega, double c, double l, double tau);

struct FMinimum {
  double omega = 0.0;
  double value = 0.0;
};

/// Global minimum of F over omega >= 0 (F is even in omega). The scan covers
/// [0, 2c + 2 sqrt(c max(l,1)) + c l tau + 1]; outside that window
/// F >= (omega - c)^2 - 2cl > 0, so nothing is lost. Uniform grid (at least
/// 4096 points, densified to 16 per oscillation of the trig terms) with
/// golden-section refinement of every bracketed local minimum.
FMinimum min_F_over_omega(double c, double l, double tau);

/// Largest pinning delay below which the network is provably stable for
/// every transmission delay, given the pinned nodes' in-degrees: the first
/// tau where min_F_over_omega reaches zero for some pinned degree. Each
/// distinct degree is handled separately (per_node_values lists them in
/// ascending degree order): degree zero analytically at pi/(2c), positive
/// degrees by a geometric-then-linear ascending scan and bisection to 1e-6
/// relative. A degree whose scan finds no sign change below tau_cap = 1e3/c
/// contributes infinity; the result is capped only if all of them do.
BoundResult tau_p_star(double c, const std::vector<double>& pinned_degrees);

struct ABPoint {
  double a = 0.0;
  double b = 0.0;
};

/// The frequency-response sums of the consensus-mode weights
///   a = c sum_i w_i theta_i / (omega^2 + theta_i^2),
///   b = c sum_i w_i omega   / (omega^2 + theta_i^2),
/// with w = zero_pair_products() paired against the sorted eigenvalues.
/// Requires a real spectrum and omega != 0 (the zero-eigenvalue term of b
/// behaves as w/omega).
ABPoint a_b_values(double omega, double c, const SpectralDecomp& decomp);

/// Largest pinning delay (transmission delay zero) below which pinning any
/// single node keeps the network stable. For each pin choice q the pinned
/// characteristic function factors through
///   1 + c e^{-lambda tau} sum_i p_i(q) / (lambda + theta_i),
/// p(q) = node_products(q); its first imaginary-axis crossing is found from
/// the positive solutions of a^2 + b^2 = 1 (bracketed on a geometric grid,
/// bisected, smallest crossing delay over all solutions). The returned value
/// is the minimum over q, so it certifies every pin choice at once and is
/// by construction independent of which node ends up pinned. Diagnostics
/// retain the per-node values and the closed-form recipe for comparison.
/// Throws NotStronglyConnected when the consensus mode is degenerate or not
/// positive everywhere, ComplexSpectrum on complex eigenvalues.
BoundResult single_node_tau_pM(const SpectralDecomp& decomp, double c);

struct LambertDiagnostics {
  std::vector<Complex> s_roots;  // pooled over pin choices, deduplicated
  int branch_span = 0;           // largest |k| evaluated
  double worst_re = 0.0;         // max Re(W_k(s)/tau_p - l)
};

/// Stability test for a normalized network (all in-degrees equal l) with
/// equal transmission and pinning delays. Per pin choice q the factor
///   1 + c sum_k p_k(q) / (e^{-l tau_p} s / tau_p + theta_k - l) = 0
/// is cleared into a polynomial in s; its roots map to characteristic roots
/// lambda = W_k(s)/tau_p - l over all branches k, swept outward until no
/// further branch can raise the running maximum (Re W_k falls like
/// -log |k|). Verdict is the worst case over pin choices, so
/// "Stable" means stable whichever single node is pinned. The returned
/// dominant value is the largest Re(W_k(s)/tau_p - l) encountered; it
/// estimates the true dominant characteristic root. Throws NotNormalized
/// when reconstructed in-degrees deviate from l by more than
/// 1e-8 max(1, |l|).
StabilityVerdict lambert_stability_test(const SpectralDecomp& decomp, double c,
                                        double l, double tau_p,
                                        LambertDiagnostics* diag = nullptr);

}  // namespace pindelay
