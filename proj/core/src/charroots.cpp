#include "pindelay/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pindelay/parallel.hpp"

namespace pindelay {

namespace {

constexpr double kRootResidualTol = 1e-8;
constexpr double kDedupeRel = 1e-6;
constexpr double kStabilizeTol = 1e-8;

}  // namespace

QuasiPoly QuasiPoly::from_problem(const PinningProblem& p) {
  QuasiPoly qp;
  qp.K = p.system.K;
  qp.A = p.system.A;
  qp.d = p.pins.indicator();
  qp.c = p.c;
  qp.tau_r = p.tau_r;
  qp.tau_p = p.tau_p;
  return qp;
}

QuasiPoly QuasiPoly::reduced(Vector K2, Matrix A22, double tau_r) {
  if (K2.size() != A22.rows() || A22.rows() != A22.cols())
    throw Error(ErrorCode::InvalidArgument, "reduced block shapes disagree");
  QuasiPoly qp;
  qp.d = Vector::Zero(K2.size());
  qp.K = std::move(K2);
  qp.A = std::move(A22);
  qp.c = 0.0;
  qp.tau_r = tau_r;
  qp.tau_p = 0.0;
  return qp;
}

ComplexMatrix QuasiPoly::matrix_at(Complex lambda) const {
  const int n = size();
  const Complex er = std::exp(-lambda * tau_r);
  const Complex ep = std::exp(-lambda * tau_p);
  ComplexMatrix m = (-er) * A.cast<Complex>();
  for (int i = 0; i < n; ++i) m(i, i) += lambda + K[i] + c * d[i] * ep;
  return m;
}

ComplexMatrix QuasiPoly::derivative_at(Complex lambda) const {
  const int n = size();
  const Complex er = std::exp(-lambda * tau_r);
  const Complex ep = std::exp(-lambda * tau_p);
  ComplexMatrix m = (tau_r * er) * A.cast<Complex>();
  for (int i = 0; i < n; ++i) m(i, i) += 1.0 - c * tau_p * d[i] * ep;
  return m;
}

Complex chi(const QuasiPoly& qp, Complex lambda) {
  return Eigen::PartialPivLU<ComplexMatrix>(qp.matrix_at(lambda)).determinant();
}

namespace {

/// Preallocated evaluation workspace; the Newton sweep over thousands of
/// seeds must not allocate per iteration.
class ChiEngine {
 public:
  explicit ChiEngine(const QuasiPoly& qp)
      : qp_(qp),
        n_(qp.size()),
        m_(n_, n_),
        mp_(n_, n_),
        x_(n_, n_),
        lu_(n_) {}

  // trace(M^{-1} M'); false when M is numerically singular at lambda.
  bool log_derivative(Complex lambda, Complex& out) {
    fill(lambda);
    lu_.compute(m_);
    const auto& diag = lu_.matrixLU().diagonal();
    for (int i = 0; i < n_; ++i)
      if (diag[i] == Complex(0.0, 0.0)) return false;
    x_ = lu_.solve(mp_);
    const Complex tr = x_.trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag())) return false;
    out = tr;
    return true;
  }

  double relative_residual(Complex lambda) {
    fill(lambda);
    lu_.compute(m_);
    double log_det = 0.0;
    const auto& diag = lu_.matrixLU().diagonal();
    for (int i = 0; i < n_; ++i) {
      const double a = std::abs(diag[i]);
      if (a == 0.0) return 0.0;
      log_det += std::log(a);
    }
    double log_rows = 0.0;
    for (int i = 0; i < n_; ++i)
      log_rows += std::log(std::max(m_.row(i).norm(), 1.0));
    const double diff = log_det - log_rows;
    if (diff > 690.0) return 1e300;
    return std::exp(diff);
  }

 private:
  void fill(Complex lambda) {
    const Complex er = std::exp(-lambda * qp_.tau_r);
    const Complex ep = std::exp(-lambda * qp_.tau_p);
    const Complex der = qp_.tau_r * er;
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) {
        m_(i, j) = -er * qp_.A(i, j);
        mp_(i, j) = der * qp_.A(i, j);
      }
    for (int i = 0; i < n_; ++i) {
      m_(i, i) += lambda + qp_.K[i] + qp_.c * qp_.d[i] * ep;
      mp_(i, i) += 1.0 - qp_.c * qp_.tau_p * qp_.d[i] * ep;
    }
  }

  const QuasiPoly& qp_;
  int n_;
  ComplexMatrix m_, mp_, x_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

struct NewtonOutcome {
  bool converged = false;
  Complex lambda;
  double last_ratio = 0.0;  // |delta_k| / |delta_{k-1}| at the end
};

NewtonOutcome newton_from(ChiEngine& engine, Complex seed, int max_iter) {
  NewtonOutcome out;
  Complex lambda = seed;
  double prev_delta = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    Complex g;
    if (!engine.log_derivative(lambda, g)) {
      out.converged = true;  // landed exactly on a root
      out.lambda = lambda;
      return out;
    }
    const double gn = std::abs(g);
    if (gn < 1e-300) return out;  // flat spot, no useful direction
    const Complex delta = -1.0 / g;
    lambda += delta;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) return out;
    if (std::abs(lambda) > 1e8) return out;
    const double dn = std::abs(delta);
    if (prev_delta > 0.0) out.last_ratio = dn / prev_delta;
    if (dn <= 1e-12 * (1.0 + std::abs(lambda))) {
      out.converged = true;
      out.lambda = lambda;
      return out;
    }
    prev_delta = dn;
  }
  return out;
}

std::vector<Complex> make_seeds(const QuasiPoly& qp, const RootSearchRegion& region,
                                const RootSearchOptions& opts, int grid) {
  std::vector<Complex> seeds;
  const int g = std::max(grid, 2);
  seeds.reserve(static_cast<size_t>(g) * static_cast<size_t>(g) + 16);
  for (int a = 0; a < g; ++a) {
    const double re = region.sigma_lo +
                      (region.sigma_hi - region.sigma_lo) * a / (g - 1.0);
    for (int b = 0; b < g; ++b) {
      const double im = region.omega_max * b / (g - 1.0);
      seeds.emplace_back(re, im);
    }
  }
  if (opts.seed_undelayed_eigenvalues) {
    // Exact roots at zero delay; excellent starting points for the delayed
    // continuation of each branch.
    Matrix m = qp.A - Matrix(qp.K.asDiagonal());
    for (int i = 0; i < qp.size(); ++i) m(i, i) -= qp.c * qp.d[i];
    Eigen::EigenSolver<Matrix> es(m);
    if (es.info() == Eigen::Success) {
      const ComplexVector ev = es.eigenvalues();
      for (int i = 0; i < ev.size(); ++i)
        seeds.emplace_back(ev[i].real(), std::abs(ev[i].imag()));
    }
  }
  return seeds;
}

}  // namespace

Complex chi_log_derivative(const QuasiPoly& qp, Complex lambda) {
  ChiEngine engine(qp);
  Complex g;
  if (!engine.log_derivative(lambda, g))
    throw Error(ErrorCode::SingularAtPoint,
                "chi is numerically singular at the evaluation point");
  return g;
}

double chi_relative_residual(const QuasiPoly& qp, Complex lambda) {
  ChiEngine engine(qp);
  return engine.relative_residual(lambda);
}

RootSearchRegion RootSearchRegion::defaults_for(const QuasiPoly& qp) {
  const double max_k = qp.K.size() ? qp.K.maxCoeff() : 0.0;
  const double c_eff = (qp.d.size() && qp.d.maxCoeff() > 0.0) ? qp.c : 0.0;
  RootSearchRegion r;
  r.sigma_hi = 2.0 * max_k + c_eff + 0.5;
  r.sigma_lo = -(2.0 * max_k + c_eff + 1.0);
  r.omega_max = 2.0 * (max_k + c_eff) +
                2.0 * std::numbers::pi / std::max({qp.tau_r, qp.tau_p, 1.0});
  return r;
}

std::vector<CharRoot> find_roots(const QuasiPoly& qp,
                                 const RootSearchRegion& region,
                                 const RootSearchOptions& opts) {
  if (qp.size() < 1) throw Error(ErrorCode::InvalidArgument, "empty system");
  const std::vector<Complex> seeds = make_seeds(qp, region, opts, opts.grid);

  struct Slot {
    bool ok = false;
    Complex lambda;
    double ratio = 0.0;
  };
  std::vector<Slot> slots(seeds.size());
  const std::ptrdiff_t chunk = 256;
  const std::ptrdiff_t n_chunks =
      (static_cast<std::ptrdiff_t>(seeds.size()) + chunk - 1) / chunk;
  parallel_for(n_chunks, [&](std::ptrdiff_t ci) {
    ChiEngine engine(qp);  // one workspace per stripe of seeds
    const size_t lo = static_cast<size_t>(ci * chunk);
    const size_t hi = std::min(seeds.size(), lo + static_cast<size_t>(chunk));
    for (size_t i = lo; i < hi; ++i) {
      const NewtonOutcome out = newton_from(engine, seeds[i], opts.max_newton_iter);
      if (!out.converged) continue;
      Complex lambda = out.lambda;
      if (lambda.imag() < 0.0) lambda = std::conj(lambda);  // conjugate root
      if (std::abs(lambda.imag()) < 1e-10) lambda = Complex(lambda.real(), 0.0);
      slots[i] = {true, lambda, out.last_ratio};
    }
  });

  ChiEngine engine(qp);
  std::vector<CharRoot> roots;
  std::vector<Complex> rejected;
  auto near = [](Complex a, Complex b) {
    return std::abs(a - b) <= kDedupeRel * (1.0 + std::abs(a));
  };
  for (const Slot& s : slots) {
    if (!s.ok) continue;
    bool seen = false;
    for (const CharRoot& r : roots)
      if (near(r.lambda, s.lambda)) {
        seen = true;
        break;
      }
    if (!seen)
      for (const Complex& r : rejected)
        if (near(r, s.lambda)) {
          seen = true;
          break;
        }
    if (seen) continue;
    const double residual = engine.relative_residual(s.lambda);
    if (residual > kRootResidualTol) {
      rejected.push_back(s.lambda);  // stalled point, not a root
      continue;
    }
    CharRoot r;
    r.lambda = s.lambda;
    r.residual = residual;
    r.residual_raw = std::abs(chi(qp, s.lambda));
    // Linear (ratio ~ 1/2) instead of quadratic tail convergence hints at a
    // multiple root.
    r.multiplicity_hint = (s.ratio > 0.3 && s.ratio < 0.7) ? 2 : 1;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](const CharRoot& a, const CharRoot& b) {
    if (a.lambda.real() != b.lambda.real())
      return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return roots;
}

CharRoot dominant_root(const QuasiPoly& qp) {
  return dominant_root(qp, RootSearchRegion::defaults_for(qp), RootSearchOptions{});
}

CharRoot dominant_root(const QuasiPoly& qp, const RootSearchRegion& region,
                       const RootSearchOptions& opts) {
  bool have_prev = false;
  Complex prev;
  CharRoot best;
  bool have_best = false;
  int agreements = 0;
  int grid = opts.grid;
  for (int level = 0; level <= opts.max_refinements; ++level) {
    RootSearchOptions level_opts = opts;
    level_opts.grid = grid;
    const std::vector<CharRoot> roots = find_roots(qp, region, level_opts);
    if (!roots.empty()) {
      const CharRoot dom = roots.front();
      if (have_prev && std::abs(dom.lambda - prev) < kStabilizeTol)
        ++agreements;
      else
        agreements = 0;
      prev = dom.lambda;
      have_prev = true;
      best = dom;
      have_best = true;
      if (agreements >= opts.required_agreements) return best;
    }
    grid *= 2;
  }
  if (!have_best)
    throw Error(ErrorCode::NoRootFound,
                "no characteristic root converged in the search region");
  return best;
}

StabilityVerdict verdict_from_root(const CharRoot& root) {
  StabilityVerdict v;
  v.dominant = root.lambda;
  v.method = "charroots";
  if (root.lambda.real() < -1e-8)
    v.verdict = Verdict::Stable;
  else if (root.lambda.real() > 1e-8)
    v.verdict = Verdict::Unstable;
  else
    v.verdict = Verdict::Inconclusive;
  return v;
}

}  // namespace pindelay
