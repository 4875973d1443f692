#include "pindelay/delay_bounds.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pindelay/lambert.hpp"

namespace pindelay {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename F>
double golden_min(double lo, double hi, const F& f) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b));
       ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double F_value(double omega, double c, double l, double tau) {
  return c * c + omega * omega +
         2.0 * c * (l * std::cos(omega * tau) - omega * std::sin(omega * tau));
}

FMinimum min_F_over_omega(double c, double l, double tau) {
  if (!(c >= 0.0) || !(l >= 0.0) || !(tau >= 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "min_F_over_omega needs nonnegative c, l, tau");
  const double hi = 2.0 * c + 2.0 * std::sqrt(c * std::max(l, 1.0)) +
                    c * l * tau + 1.0;
  const double oscillations = hi * tau / (2.0 * kPi);
  int grid = std::max(4096, static_cast<int>(std::ceil(16.0 * oscillations)));
  grid = std::min(grid, 1 << 21);

  auto f = [&](double w) { return F_value(w, c, l, tau); };

  const double step = hi / grid;
  FMinimum best{0.0, f(0.0)};
  double prev2 = best.value;
  double prev1 = f(step);
  if (prev1 < best.value) best = {step, prev1};
  for (int j = 2; j <= grid; ++j) {
    const double x = j * step;
    const double cur = f(x);
    if (cur < best.value) best = {x, cur};
    if (prev1 <= prev2 && prev1 <= cur) {
      const double x1 = golden_min((j - 2) * step, x, f);
      const double v1 = f(x1);
      if (v1 < best.value) best = {x1, v1};
    }
    prev2 = prev1;
    prev1 = cur;
  }
  // edge minima at the scan boundaries
  if (f(0.0) <= f(step)) {
    const double x1 = golden_min(0.0, step, f);
    const double v1 = f(x1);
    if (v1 < best.value) best = {x1, v1};
  }
  if (prev1 <= prev2) {
    const double x1 = golden_min(hi - step, hi, f);
    const double v1 = f(x1);
    if (v1 < best.value) best = {x1, v1};
  }
  return best;
}

BoundResult tau_p_star(double c, const std::vector<double>& pinned_degrees) {
  if (pinned_degrees.empty())
    throw Error(ErrorCode::EmptyPinSet,
                "the admissible-delay bound needs at least one pinned degree");
  if (!(c > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "pinning strength must be positive");
  for (double l : pinned_degrees)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw Error(ErrorCode::InvalidArgument,
                  "pinned in-degrees must be finite and nonnegative");

  const double cap = 1e3 / c;

  // Distinct degrees only; symmetric pin sets repeat them.
  std::vector<double> degrees = pinned_degrees;
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end(),
                            [](double a, double b) {
                              return std::abs(a - b) <=
                                     1e-12 * std::max(1.0, std::abs(b));
                            }),
                degrees.end());

  BoundResult r;
  r.kind = BoundKind::TauPStar;
  r.tau_cap = cap;
  r.value = kInf;

  for (double l : degrees) {
    double star;
    FMinimum at{c, 0.0};
    if (l <= 1e-6 * c) {
      // An isolated pinned node: F = (omega - c sin)^2 + (c cos)^2 touches
      // zero without a sign change, first at omega = c, tau = pi / (2c).
      // Degrees below roundoff visibility take the same value (continuity,
      // and it errs on the small side).
      star = 0.5 * kPi / c;
    } else {
      auto inner = [&](double tau) { return min_F_over_omega(c, l, tau); };

      // Ascending geometric scan for the first loss of positivity. At
      // tau = 0, F = c^2 + omega^2 + 2cl > 0.
      const double start =
          1.5e-2 / (2.0 * c + 2.0 * std::sqrt(c * std::max(l, 1.0)) +
                    c * l + 1.0);
      double lo = 0.0, hi = -1.0;
      double prev = 0.0;
      for (double tau = start;; tau *= 1.5) {
        if (tau > cap) tau = cap;
        if (inner(tau).value <= 0.0) {
          lo = prev;
          hi = tau;
          break;
        }
        prev = tau;
        if (tau >= cap) break;
      }
      if (hi < 0.0) {
        star = kInf;
        at = inner(cap);
      } else {
        // Linear pass inside the coarse bracket so a narrow dip cannot push
        // the reported bound past the first sign change.
        const int kLin = 64;
        const double width = (hi - lo) / kLin;
        for (int j = 1; j <= kLin; ++j) {
          const double t = lo + j * width;
          if (inner(t).value <= 0.0) {
            hi = t;
            lo = t - width;
            break;
          }
        }
        while (hi - lo > 1e-6 * hi) {
          const double mid = 0.5 * (lo + hi);
          if (inner(mid).value > 0.0)
            lo = mid;
          else
            hi = mid;
        }
        star = lo;
        at = inner(lo);
      }
    }
    r.per_node_values.push_back(star);
    if (star < r.value || r.per_node_values.size() == 1) {
      r.value = star;
      r.omega_star = at.omega;
      r.min_f = at.value;
    }
  }

  r.capped = !std::isfinite(r.value);
  return r;
}

namespace {

struct AB {
  double a = 0.0;
  double b = 0.0;
};

AB ab_at(double omega, double c, const Vector& thetas, const Vector& weights) {
  AB out;
  for (int i = 0; i < thetas.size(); ++i) {
    const double den = omega * omega + thetas[i] * thetas[i];
    out.a += weights[i] * thetas[i] / den;
    out.b += weights[i] * omega / den;
  }
  out.a *= c;
  out.b *= c;
  return out;
}

double g_at(double omega, double c, const Vector& thetas,
            const Vector& weights) {
  const AB ab = ab_at(omega, c, thetas, weights);
  return ab.a * ab.a + ab.b * ab.b - 1.0;
}

/// Smallest positive delay with cos(omega tau) = -a and sin(omega tau) = b.
double crossing_delay(double omega, const AB& ab) {
  double angle = std::atan2(ab.b, -ab.a);
  if (angle <= 0.0) angle += 2.0 * kPi;
  return angle / omega;
}

struct CrossingSet {
  std::vector<double> omegas;  // ascending
  std::vector<double> delays;  // matching crossing delays
};

CrossingSet find_crossings(double c, const Vector& thetas,
                           const Vector& weights) {
  const double sum_w = weights.cwiseAbs().sum();
  const double max_th = thetas.cwiseAbs().maxCoeff();
  // Beyond this, |a| + |b| <= c sum|w| (max|theta| + omega) / omega^2 < 1.
  const double omega_max = c * sum_w * (1.0 + max_th) + 1.0;
  const double omega_min = 1e-8;

  std::vector<double> pts;
  const int kGeo = 3000;
  const double ratio = std::pow(omega_max / omega_min, 1.0 / kGeo);
  for (int j = 0; j <= kGeo; ++j)
    pts.push_back(omega_min * std::pow(ratio, j));
  const int kLin = 4096;
  for (int j = 1; j <= kLin; ++j) pts.push_back(omega_max * j / kLin);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  CrossingSet out;
  double xp = pts[0];
  double gp = g_at(xp, c, thetas, weights);
  for (std::size_t j = 1; j < pts.size(); ++j) {
    const double x = pts[j];
    const double g = g_at(x, c, thetas, weights);
    if (g == 0.0) {
      const AB ab = ab_at(x, c, thetas, weights);
      out.omegas.push_back(x);
      out.delays.push_back(crossing_delay(x, ab));
    } else if ((gp > 0.0) != (g > 0.0)) {
      double a = xp, b = x;
      double ga = gp;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g_at(mid, c, thetas, weights);
        if (gm == 0.0) {
          a = b = mid;
          break;
        }
        if ((ga > 0.0) == (gm > 0.0)) {
          a = mid;
          ga = gm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      const AB ab = ab_at(root, c, thetas, weights);
      out.omegas.push_back(root);
      out.delays.push_back(crossing_delay(root, ab));
    }
    xp = x;
    gp = g;
  }
  return out;
}

}  // namespace

ABPoint a_b_values(double omega, double c, const SpectralDecomp& decomp) {
  if (omega == 0.0)
    throw Error(ErrorCode::InvalidArgument,
                "a_b_values is undefined at omega = 0");
  const Vector thetas = decomp.thetas_real();
  const Vector w = decomp.zero_pair_products();
  const AB ab = ab_at(omega, c, thetas, w);
  return {ab.a, ab.b};
}

BoundResult single_node_tau_pM(const SpectralDecomp& decomp, double c) {
  if (!(c > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "pinning strength must be positive");
  const Vector thetas = decomp.thetas_real();
  const Vector psi = decomp.zero_pair_products();
  if (psi.minCoeff() <= 1e-12)
    throw Error(ErrorCode::NotStronglyConnected,
                "consensus-mode weights must be positive at every node");

  const int n = decomp.size();
  BoundResult r;
  r.kind = BoundKind::TauPM;
  r.per_node_values.assign(n, 0.0);
  r.value = kInf;

  CrossingSet deciding_set;
  for (int q = 0; q < n; ++q) {
    const Vector p = decomp.node_products(q);
    if (p.minCoeff() < -1e-12) r.negative_products = true;
    CrossingSet cs = find_crossings(c, thetas, p);
    if (cs.delays.empty())
      throw Error(ErrorCode::NoRootFound,
                  "no feedback-loop crossing found for a pin choice");
    const double first =
        *std::min_element(cs.delays.begin(), cs.delays.end());
    r.per_node_values[q] = first;
    if (first < r.value) {
      r.value = first;
      r.deciding_node = q;
      deciding_set = std::move(cs);
    }
  }
  r.crossing_omegas = deciding_set.omegas;

  // Closed-form recipe: evaluate at the largest crossing of the
  // consensus-mode weights and take the arccos branch.
  const CrossingSet zc = find_crossings(c, thetas, psi);
  if (!zc.omegas.empty()) {
    const double wmax = zc.omegas.back();
    const AB ab = ab_at(wmax, c, thetas, psi);
    r.formula_value =
        std::acos(std::clamp(-ab.a, -1.0, 1.0)) / wmax;
    r.formula_differs =
        std::abs(r.formula_value - r.value) > 1e-6 * std::max(1.0, r.value);
  }
  return r;
}

namespace {

std::vector<double> poly_mul(const std::vector<double>& p, double b0,
                             double b1) {
  // multiply by (b1 s + b0)
  std::vector<double> out(p.size() + 1, 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    out[j] += p[j] * b0;
    out[j + 1] += p[j] * b1;
  }
  return out;
}

/// Characteristic polynomial in s of one pin choice's feedback factor:
///   prod_k (alpha s + beta_k) + c sum_k p_k prod_{j!=k} (alpha s + beta_j).
std::vector<double> factor_polynomial(const Vector& p, const Vector& beta,
                                      double alpha, double c) {
  const int n = static_cast<int>(p.size());
  std::vector<double> poly{1.0};
  for (int k = 0; k < n; ++k) poly = poly_mul(poly, beta[k], alpha);
  for (int k = 0; k < n; ++k) {
    std::vector<double> term{c * p[k]};
    for (int j = 0; j < n; ++j)
      if (j != k) term = poly_mul(term, beta[j], alpha);
    term.resize(poly.size(), 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) poly[j] += term[j];
  }
  return poly;
}

std::vector<Complex> polynomial_roots(std::vector<double> coeffs) {
  // ascending degree; leading coefficient is alpha^n > 0
  std::vector<Complex> roots;
  std::size_t lead = coeffs.size() - 1;
  while (lead > 0 && coeffs[lead] == 0.0) --lead;
  coeffs.resize(lead + 1);
  if (coeffs.size() <= 1) return roots;

  const double scale =
      *std::max_element(coeffs.begin(), coeffs.end(),
                        [](double x, double y) {
                          return std::abs(x) < std::abs(y);
                        });
  std::size_t low = 0;
  while (low < coeffs.size() - 1 &&
         std::abs(coeffs[low]) <= 1e-14 * std::abs(scale)) {
    roots.push_back(Complex(0.0, 0.0));
    ++low;
  }
  coeffs.erase(coeffs.begin(), coeffs.begin() + low);
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg == 0) return roots;

  // balance by substituting s = gamma t with |a_0| gamma^deg = |a_deg|
  const double gamma =
      std::pow(std::abs(coeffs[0] / coeffs[deg]), 1.0 / deg);
  double pw = 1.0;
  for (int j = 0; j <= deg; ++j) {
    coeffs[j] *= pw;
    pw *= gamma;
  }
  Matrix comp = Matrix::Zero(deg, deg);
  for (int j = 0; j + 1 < deg; ++j) comp(j + 1, j) = 1.0;
  for (int j = 0; j < deg; ++j) comp(j, deg - 1) = -coeffs[j] / coeffs[deg];
  Eigen::EigenSolver<Matrix> es(comp);
  for (int j = 0; j < deg; ++j) roots.push_back(gamma * es.eigenvalues()[j]);
  return roots;
}

}  // namespace

StabilityVerdict lambert_stability_test(const SpectralDecomp& decomp, double c,
                                        double l, double tau_p,
                                        LambertDiagnostics* diag) {
  if (!(c > 0.0))
    throw Error(ErrorCode::InvalidArgument,
                "pinning strength must be positive");
  if (!(tau_p > 0.0))
    throw Error(ErrorCode::InvalidArgument, "delay must be positive");
  if (!(l >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "in-degree must be nonnegative");

  const Vector thetas = decomp.thetas_real();
  const Vector psi = decomp.zero_pair_products();
  if (psi.minCoeff() <= 1e-12)
    throw Error(ErrorCode::NotStronglyConnected,
                "consensus-mode weights must be positive at every node");

  const Matrix right = decomp.right_real();
  const Matrix left = decomp.left_real();
  const Matrix lap = right * thetas.asDiagonal() * left.transpose();
  for (int i = 0; i < decomp.size(); ++i)
    if (std::abs(lap(i, i) - l) > 1e-8 * std::max(1.0, std::abs(l)))
      throw Error(ErrorCode::NotNormalized,
                  "all in-degrees must equal the given value");

  const int n = decomp.size();
  const double alpha = std::exp(-l * tau_p) / tau_p;
  Vector beta(n);
  for (int k = 0; k < n; ++k) beta[k] = thetas[k] - l;

  // One polynomial per pin choice; symmetric nodes produce duplicates,
  // dropped by coefficient comparison.
  std::vector<std::vector<double>> polys;
  for (int q = 0; q < n; ++q) {
    std::vector<double> poly =
        factor_polynomial(decomp.node_products(q), beta, alpha, c);
    double scale = 0.0;
    for (double v : poly) scale = std::max(scale, std::abs(v));
    bool dup = false;
    for (const auto& other : polys) {
      bool same = true;
      for (std::size_t j = 0; j < poly.size() && same; ++j)
        if (std::abs(poly[j] - other[j]) > 1e-12 * scale) same = false;
      if (same) {
        dup = true;
        break;
      }
    }
    if (!dup) polys.push_back(std::move(poly));
  }

  std::vector<Complex> s_roots;
  for (const auto& poly : polys)
    for (const Complex& s : polynomial_roots(poly)) {
      bool seen = false;
      for (const Complex& t : s_roots)
        if (std::abs(s - t) <= 1e-10 * std::max(1.0, std::abs(t))) {
          seen = true;
          break;
        }
      if (!seen) s_roots.push_back(s);
    }

  // Sweep branches outward. Re W_k(s) falls like -log|k|, so once a branch
  // pair sits clearly below the best real part seen so far, no later branch
  // can change the verdict.
  double worst = -kInf;
  double worst_w = -kInf;
  Complex worst_lambda(-kInf, 0.0);
  int span = 0;
  auto visit = [&](int k) {
    double level_max = -kInf;
    for (const Complex& s : s_roots) {
      if (std::abs(s) < 1e-300) {
        if (k != 0) continue;
        // W_0(0) = 0 maps to lambda = -l
        worst_w = std::max(worst_w, 0.0);
        if (-l > worst) {
          worst = -l;
          worst_lambda = Complex(-l, 0.0);
        }
        continue;
      }
      const Complex w = lambert_w(k, s);
      level_max = std::max(level_max, w.real());
      worst_w = std::max(worst_w, w.real());
      const Complex lambda = w / tau_p - l;
      if (lambda.real() > worst) {
        worst = lambda.real();
        worst_lambda = lambda;
      }
    }
    return level_max;
  };
  visit(0);
  for (int k = 1;; ++k) {
    const double level = std::max(visit(k), visit(-k));
    span = k;
    if (k >= 4 && level < worst_w - 0.5) break;
    if (k > 10000)
      throw Error(ErrorCode::NonConvergence,
                  "branch sweep failed to settle");
  }

  if (diag) {
    diag->s_roots = s_roots;
    diag->branch_span = span;
    diag->worst_re = worst;
  }

  StabilityVerdict v;
  v.dominant = worst_lambda;
  v.method = "lambert";
  if (worst < -1e-8)
    v.verdict = Verdict::Stable;
  else if (worst > 1e-8)
    v.verdict = Verdict::Unstable;
  else
    v.verdict = Verdict::Inconclusive;
  return v;
}

}  // namespace pindelay
