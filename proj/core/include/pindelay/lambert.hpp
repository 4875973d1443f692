#pragma once

#include "pindelay/types.hpp"

namespace pindelay {

/// Branch k of the Lambert W function: W satisfies W e^W = z with the
/// standard branch bands (k = 0 the principal branch). Halley iteration
/// from a branch-aware starting point (series near 0, branch-point series
/// near -1/e, asymptotic log form otherwise), converged when
/// |W e^W - z| <= 1e-12 max(1, |z|). Throws NonConvergence after 100
/// iterations and InvalidArgument for W_k(0) with k != 0.
Complex lambert_w(int branch, Complex z);

}  // namespace pindelay
