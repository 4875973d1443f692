#pragma once

#include <vector>

#include "pindelay/graph.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

enum class Regime { SmallC, LargeC };

struct PerturbationEstimate {
  Regime regime = Regime::SmallC;
  Complex dominant_root_estimate{0.0, 0.0};
  // SmallC ingredients: the consensus-mode projections of the pin pattern
  // and of the in-degrees.
  double psi_D_phi = 0.0;
  double psi_K_phi = 0.0;
  // LargeC ingredient: the reduced system's dominant root.
  Complex mu_star{0.0, 0.0};
};

/// First-order decay rate for weak pinning. The consensus eigenvalue moves
/// off zero with slope
///   -(psi^T D phi) / (1 + tau_r psi^T K phi)
/// in c, where (phi, psi) is the consensus eigenpair; the returned estimate
/// is slope * c (real, <= 0). Throws NotStronglyConnected or EmptyPinSet.
PerturbationEstimate small_c_dominant(const LaplacianSystem& sys,
                                      const PinSet& pins, double tau_r,
                                      double c);

/// Mean-field form of the same slope for homogeneous random networks:
///   -pin_fraction * c / (1 + tau_r * mean_degree).
double mean_field_estimate(double pin_fraction, double mean_degree,
                           double tau_r, double c);

struct ReducedSystem {
  Vector K2;
  Matrix A22;
  /// Node indices with pinned nodes first, then unpinned; the blocks above
  /// are taken from the unpinned tail.
  std::vector<int> permutation;
  int pinned_count = 0;
};

/// Unpinned-block dynamics y' = -K2 y + A22 y(t - tau_r) obtained by
/// permuting pinned nodes to the front and discarding their rows and
/// columns. Throws AllPinned when no unpinned node remains.
ReducedSystem reduced_system(const LaplacianSystem& sys, const PinSet& pins);

/// Strong-pinning limit of the decay rate: the dominant root mu of
/// det(mu I + K2 - A22 e^{-mu tau_r}).
PerturbationEstimate large_c_dominant(const ReducedSystem& red, double tau_r);

/// The strong-pinning analysis applies when the pinned nodes' own feedback
/// loop is stable, i.e. tau_p * c < pi/2.
bool check_large_c_condition(double c, double tau_p);

}  // namespace pindelay
