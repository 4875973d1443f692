#pragma once

#include <string>

#include "pindelay/graph.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

/// Eigendecomposition of the Laplacian with matched left/right eigenvector
/// pairs. Columns i of right() and left() satisfy L r_i = theta_i r_i,
/// l_i^T L = theta_i l_i^T, and left().transpose() * right() == I (also for
/// repeated eigenvalues, which are biorthonormalized cluster-wise).
/// Eigenvalues are sorted by (Re, Im) ascending; an eigenvalue within
/// 1e-9 * max(1, ||L||_F) of zero is snapped to exactly 0.
class SpectralDecomp {
 public:
  int size() const { return static_cast<int>(thetas_.size()); }
  const ComplexVector& thetas() const { return thetas_; }
  const ComplexMatrix& right() const { return right_; }
  const ComplexMatrix& left() const { return left_; }

  int zero_index() const { return zero_index_; }
  bool zero_simple() const { return zero_simple_; }
  bool real_spectrum() const { return real_spectrum_; }
  double biorthogonality_residual() const { return biorth_residual_; }
  double eigen_residual() const { return eigen_residual_; }

  /// Real views; throw ComplexSpectrum unless real_spectrum().
  Vector thetas_real() const;
  Matrix right_real() const;
  Matrix left_real() const;

  /// Componentwise products r_i[q] * l_i[q] for each eigenpair i: the weight
  /// of mode i seen from node q. They satisfy sum_i products[i] = 1 and give
  /// the partial-fraction expansion of the resolvent diagonal,
  ///   [(lambda I + L)^{-1}]_{qq} = sum_i products[i] / (lambda + theta_i).
  /// Requires real_spectrum(). Products can be negative on directed graphs.
  Vector node_products(int q) const;

  /// Componentwise products of the zero-eigenvalue pair itself,
  /// r_z[i] * l_z[i] (with the right zero vector constant, these are the
  /// entries of the left zero eigenvector normalized to sum 1). Requires
  /// real_spectrum() and zero_simple().
  Vector zero_pair_products() const;

  std::string to_json() const;  // for debugging / provenance dumps

 private:
  friend SpectralDecomp eigendecompose(const LaplacianSystem&);
  ComplexVector thetas_;
  ComplexMatrix right_, left_;
  int zero_index_ = -1;
  bool zero_simple_ = false;
  bool real_spectrum_ = false;
  double biorth_residual_ = 0.0;
  double eigen_residual_ = 0.0;
};

/// Throws NonDiagonalizable when the eigenvector basis is numerically
/// defective (condition number above 1e10, or left/right spectra that cannot
/// be matched).
SpectralDecomp eigendecompose(const LaplacianSystem& sys);

/// Right and left eigenvectors for eigenvalue 0 of a strongly connected
/// graph's Laplacian: phi = 1 (all ones) and psi with psi^T L = 0,
/// sum_i psi_i = 1, psi_i > 0. Throws NotStronglyConnected otherwise.
struct ZeroPair {
  Vector phi;
  Vector psi;
};
ZeroPair zero_eigvec_pair(const LaplacianSystem& sys);

/// Largest real part over eig(-(L + c D)): the decay rate of the undelayed
/// pinned system.
double undelayed_spectral_abscissa(const LaplacianSystem& sys,
                                   const PinSet& pins, double c);

}  // namespace pindelay
