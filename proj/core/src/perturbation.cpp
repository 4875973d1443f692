#include "pindelay/perturbation.hpp"

#include <cmath>
#include <numbers>

#include "pindelay/charroots.hpp"
#include "pindelay/spectral.hpp"

namespace pindelay {

PerturbationEstimate small_c_dominant(const LaplacianSystem& sys,
                                      const PinSet& pins, double tau_r,
                                      double c) {
  if (pins.count() == 0)
    throw Error(ErrorCode::EmptyPinSet,
                "the weak-pinning estimate needs at least one pinned node");
  if (!(tau_r >= 0.0) || !(c >= 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "delay and strength must be nonnegative");

  const ZeroPair zp = zero_eigvec_pair(sys);
  PerturbationEstimate est;
  est.regime = Regime::SmallC;
  double pd = 0.0;
  for (int i : pins.members()) pd += zp.psi[i] * zp.phi[i];
  est.psi_D_phi = pd;
  est.psi_K_phi = zp.psi.dot(sys.K.cwiseProduct(zp.phi));
  est.dominant_root_estimate =
      Complex(-pd * c / (1.0 + tau_r * est.psi_K_phi), 0.0);
  return est;
}

double mean_field_estimate(double pin_fraction, double mean_degree,
                           double tau_r, double c) {
  return -pin_fraction * c / (1.0 + tau_r * mean_degree);
}

ReducedSystem reduced_system(const LaplacianSystem& sys, const PinSet& pins) {
  const int n = sys.size();
  if (pins.count() == n)
    throw Error(ErrorCode::AllPinned,
                "reduced system is empty when every node is pinned");

  ReducedSystem red;
  red.pinned_count = pins.count();
  for (int i : pins.members()) red.permutation.push_back(i);
  std::vector<int> unpinned;
  for (int i = 0; i < n; ++i)
    if (!pins.contains(i)) unpinned.push_back(i);
  red.permutation.insert(red.permutation.end(), unpinned.begin(),
                         unpinned.end());

  const int m = static_cast<int>(unpinned.size());
  red.K2.resize(m);
  red.A22.resize(m, m);
  for (int i = 0; i < m; ++i) {
    red.K2[i] = sys.K[unpinned[i]];
    for (int j = 0; j < m; ++j)
      red.A22(i, j) = sys.A(unpinned[i], unpinned[j]);
  }
  return red;
}

PerturbationEstimate large_c_dominant(const ReducedSystem& red, double tau_r) {
  if (red.K2.size() == 0)
    throw Error(ErrorCode::InvalidArgument, "reduced system is empty");
  if (!(tau_r >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "delay must be nonnegative");

  const QuasiPoly qp = QuasiPoly::reduced(red.K2, red.A22, tau_r);
  const CharRoot root = dominant_root(qp);

  PerturbationEstimate est;
  est.regime = Regime::LargeC;
  est.mu_star = root.lambda;
  est.dominant_root_estimate = root.lambda;
  return est;
}

bool check_large_c_condition(double c, double tau_p) {
  return tau_p * c < std::numbers::pi / 2.0;
}

}  // namespace pindelay
