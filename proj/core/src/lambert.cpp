#include "pindelay/lambert.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace pindelay {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// truncated expansion about the branch point -1/e, where W = -1 + p - p^2/3
// + 11 p^3/72 with p^2 = 2(ez + 1); the sign of p selects the sheet
Complex branch_point_series(Complex p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

// treat either signed zero as the real axis so conjugation identities hold
bool lower_half(Complex z) {
  return z.imag() < 0.0 || (z.imag() == 0.0 && std::signbit(z.imag()));
}

void push_seed(std::vector<Complex>& seeds, Complex s) {
  for (const Complex& t : seeds)
    if (std::abs(t - s) < 1e-3 * std::max(1.0, std::abs(s))) return;
  seeds.push_back(s);
}

// candidate starting points, best first; the later entries only matter when
// an earlier one converges to a root of the wrong branch
std::vector<Complex> candidate_seeds(int k, Complex z) {
  std::vector<Complex> seeds;
  const Complex bp(-1.0 / std::numbers::e, 0.0);
  if (std::abs(z - bp) < 0.5) {
    const Complex p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    // near -1/e branch 0 meets branch -1 above the cut and branch +1 below
    // it; on the real segment both neighbours take the real root -1 - |p|
    if (k == 0) push_seed(seeds, branch_point_series(p));
    if ((k == -1 && !lower_half(z)) || (k == 1 && lower_half(z)))
      push_seed(seeds, branch_point_series(-p));
  }
  if (k == 0) {
    if (std::abs(z) < 0.5) push_seed(seeds, z * (1.0 - z + 1.5 * z * z));
    const Complex l1 = std::log(z);
    if (std::abs(l1) < 2.5)
      // moderate |z|, where the log-based seed is unreliable: expand about
      // z = e, where W = 1 with slope 1/(2e)
      push_seed(seeds, 1.0 + (z - std::numbers::e) / (2.0 * std::numbers::e));
    if (std::abs(l1) > 0.5) push_seed(seeds, l1 - std::log(l1));
    push_seed(seeds, Complex(0.5671432904097838, 0.0));  // W(1), a safe net
  } else {
    const Complex l1 = std::log(z) + Complex(0.0, kTwoPi * k);
    push_seed(seeds, l1 - std::log(l1));
    push_seed(seeds, l1);
  }
  return seeds;
}

std::optional<Complex> halley(Complex z, Complex w) {
  const double base_tol = 1e-12 * std::max(1.0, std::abs(z));
  for (int it = 0; it < 100; ++it) {
    const Complex ew = std::exp(w);
    const Complex f = w * ew - z;
    // On far branches |Im w| ~ 2*pi*|k| amplifies the phase roundoff of
    // exp(w), so the achievable residual floor grows with |w|.
    const double tol = std::max(
        base_tol, 32.0 * std::numeric_limits<double>::epsilon() *
                      std::abs(w) * std::max(1.0, std::abs(z)));
    if (std::abs(f) <= tol) return w;
    // Halley: w <- w - f / (e^w (w+1) - (w+2) f / (2w + 2))
    const Complex denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == Complex(0.0, 0.0) || !std::isfinite(std::abs(denom)))
      return std::nullopt;
    const Complex next = w - f / denom;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
      return std::nullopt;
    w = next;
  }
  return std::nullopt;
}

// w solves w e^w = z; recover which branch it lies on from
// W_k + Log W_k = Log z + 2 pi i k. That identity cannot separate the two
// real roots on the segment (-1/e, 0), so those are split at w = -1, with
// branches +1 and -1 sharing the real root where the conjugate pair merges.
bool on_branch(int k, Complex w, Complex z) {
  if (w.imag() == 0.0 && z.imag() == 0.0 && z.real() < 0.0) {
    if (k == 0) return w.real() >= -1.0 - 1e-6;
    return std::abs(k) == 1 && w.real() <= -1.0 + 1e-6;
  }
  const Complex diff = w + std::log(w) - std::log(z);
  return std::lround(diff.imag() / kTwoPi) == k;
}

}  // namespace

Complex lambert_w(int branch, Complex z) {
  if (z == Complex(0.0, 0.0)) {
    if (branch == 0) return Complex(0.0, 0.0);
    throw Error(ErrorCode::InvalidArgument,
                "W_k(0) is undefined for branch k != 0");
  }
  for (const Complex& seed : candidate_seeds(branch, z)) {
    const std::optional<Complex> w = halley(z, seed);
    if (w && on_branch(branch, *w, z)) return *w;
  }
  throw Error(ErrorCode::NonConvergence,
              "Lambert W did not converge to the requested branch");
}

}  // namespace pindelay
