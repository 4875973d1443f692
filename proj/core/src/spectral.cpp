#include "pindelay/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <json.hpp>

namespace pindelay {

namespace {

constexpr double kCondLimit = 1e10;
constexpr double kZeroSnapRel = 1e-9;
constexpr double kRealSpectrumRel = 1e-9;
constexpr double kMatchRel = 1e-7;

// Rotate each column so its largest-magnitude entry is real positive, then
// scale to unit norm. Makes the basis deterministic up to solver output.
void normalize_columns(ComplexMatrix& m) {
  for (int c = 0; c < m.cols(); ++c) {
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < m.rows(); ++r) {
      const double a = std::abs(m(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (best <= 0.0) continue;
    const Complex pivot = m(arg, c);
    m.col(c) *= std::conj(pivot) / std::abs(pivot);
    m.col(c) /= m.col(c).norm();
  }
}

std::vector<int> sorted_order(const ComplexVector& vals) {
  std::vector<int> order(static_cast<size_t>(vals.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals[a].real() != vals[b].real()) return vals[a].real() < vals[b].real();
    return vals[a].imag() < vals[b].imag();
  });
  return order;
}

}  // namespace

SpectralDecomp eigendecompose(const LaplacianSystem& sys) {
  const int n = sys.size();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "empty system");
  const double scale = std::max(1.0, sys.L.norm());

  Eigen::EigenSolver<Matrix> right_solver(sys.L);
  Eigen::EigenSolver<Matrix> left_solver(sys.L.transpose());
  if (right_solver.info() != Eigen::Success || left_solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "eigenvalue iteration failed");

  ComplexVector rvals = right_solver.eigenvalues();
  ComplexVector lvals = left_solver.eigenvalues();
  ComplexMatrix right = right_solver.eigenvectors();
  ComplexMatrix left = left_solver.eigenvectors();

  const auto rorder = sorted_order(rvals);
  const auto lorder = sorted_order(lvals);
  SpectralDecomp d;
  d.thetas_.resize(n);
  d.right_.resize(n, n);
  d.left_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    d.thetas_[i] = rvals[rorder[static_cast<size_t>(i)]];
    d.right_.col(i) = right.col(rorder[static_cast<size_t>(i)]);
    d.left_.col(i) = left.col(lorder[static_cast<size_t>(i)]);
    const Complex lv = lvals[lorder[static_cast<size_t>(i)]];
    if (std::abs(d.thetas_[i] - lv) > kMatchRel * scale)
      throw Error(ErrorCode::NonDiagonalizable,
                  "left/right eigenvalue mismatch at index " + std::to_string(i));
  }

  // Snap the consensus eigenvalue(s) to exactly zero.
  int zeros = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(d.thetas_[i]) < kZeroSnapRel * scale) {
      d.thetas_[i] = Complex(0.0, 0.0);
      ++zeros;
    }
  d.real_spectrum_ = true;
  for (int i = 0; i < n; ++i)
    if (std::abs(d.thetas_[i].imag()) > kRealSpectrumRel * scale) {
      d.real_spectrum_ = false;
      break;
    }
  if (d.real_spectrum_)
    for (int i = 0; i < n; ++i) d.thetas_[i] = Complex(d.thetas_[i].real(), 0.0);

  normalize_columns(d.right_);
  normalize_columns(d.left_);
  if (d.real_spectrum_) {
    d.right_ = d.right_.real().cast<Complex>();
    d.left_ = d.left_.real().cast<Complex>();
    for (int c = 0; c < n; ++c) {
      const double rn = d.right_.col(c).norm(), ln = d.left_.col(c).norm();
      if (rn < 0.5 || ln < 0.5)
        throw Error(ErrorCode::NonDiagonalizable,
                    "eigenvector with essentially complex entries for a real eigenvalue");
      d.right_.col(c) /= rn;
      d.left_.col(c) /= ln;
    }
  }

  {
    Eigen::JacobiSVD<ComplexMatrix> svd(d.right_);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kCondLimit)
      throw Error(ErrorCode::NonDiagonalizable,
                  "eigenvector basis condition number above 1e10");
  }

  // Biorthonormalize cluster-wise: within a repeated eigenvalue the two
  // solvers may span the eigenspace differently, so solve a small Gram
  // system instead of scaling pair by pair.
  int lo = 0;
  while (lo < n) {
    int hi = lo + 1;
    while (hi < n && std::abs(d.thetas_[hi] - d.thetas_[lo]) <= kMatchRel * scale) ++hi;
    const int k = hi - lo;
    const ComplexMatrix X = d.right_.middleCols(lo, k);
    const ComplexMatrix Z = d.left_.middleCols(lo, k);
    const ComplexMatrix G = Z.transpose() * X;  // plain transpose: left pairs via z^T L
    Eigen::FullPivLU<ComplexMatrix> lu(G);
    if (!lu.isInvertible())
      throw Error(ErrorCode::NonDiagonalizable,
                  "degenerate eigenvalue cluster could not be biorthonormalized");
    d.left_.middleCols(lo, k) = Z * lu.inverse().transpose();
    lo = hi;
  }

  d.biorth_residual_ =
      (d.left_.transpose() * d.right_ - ComplexMatrix::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (d.biorth_residual_ > 1e-6)
    throw Error(ErrorCode::NonDiagonalizable,
                "biorthogonality residual " + std::to_string(d.biorth_residual_));

  const ComplexMatrix lc = sys.L.cast<Complex>();
  double eig_res = 0.0;
  for (int i = 0; i < n; ++i) {
    eig_res = std::max(eig_res,
                       (lc * d.right_.col(i) - d.thetas_[i] * d.right_.col(i)).norm());
    eig_res = std::max(
        eig_res,
        (lc.transpose() * d.left_.col(i) - d.thetas_[i] * d.left_.col(i)).norm());
  }
  d.eigen_residual_ = eig_res / scale;

  d.zero_index_ = 0;
  double best = std::abs(d.thetas_[0]);
  for (int i = 1; i < n; ++i)
    if (std::abs(d.thetas_[i]) < best) {
      best = std::abs(d.thetas_[i]);
      d.zero_index_ = i;
    }
  d.zero_simple_ = (zeros == 1);
  return d;
}

Vector SpectralDecomp::thetas_real() const {
  if (!real_spectrum_)
    throw Error(ErrorCode::ComplexSpectrum,
                "operation requires a real Laplacian spectrum");
  return thetas_.real();
}

Matrix SpectralDecomp::right_real() const {
  if (!real_spectrum_)
    throw Error(ErrorCode::ComplexSpectrum,
                "operation requires a real Laplacian spectrum");
  return right_.real();
}

Matrix SpectralDecomp::left_real() const {
  if (!real_spectrum_)
    throw Error(ErrorCode::ComplexSpectrum,
                "operation requires a real Laplacian spectrum");
  return left_.real();
}

Vector SpectralDecomp::node_products(int q) const {
  if (q < 0 || q >= size())
    throw Error(ErrorCode::InvalidArgument, "node index out of range");
  const Matrix r = right_real();
  const Matrix l = left_real();
  Vector p(size());
  for (int i = 0; i < size(); ++i) p[i] = r(q, i) * l(q, i);
  return p;
}

Vector SpectralDecomp::zero_pair_products() const {
  if (!zero_simple_)
    throw Error(ErrorCode::NotStronglyConnected,
                "zero eigenvalue is not simple");
  const Matrix r = right_real();
  const Matrix l = left_real();
  Vector p(size());
  for (int i = 0; i < size(); ++i)
    p[i] = r(i, zero_index_) * l(i, zero_index_);
  return p;
}

std::string SpectralDecomp::to_json() const {
  nlohmann::json doc;
  auto& th = doc["thetas"];
  for (int i = 0; i < size(); ++i)
    th.push_back({thetas_[i].real(), thetas_[i].imag()});
  doc["zero_index"] = zero_index_;
  doc["zero_simple"] = zero_simple_;
  doc["real_spectrum"] = real_spectrum_;
  doc["biorthogonality_residual"] = biorth_residual_;
  doc["eigen_residual"] = eigen_residual_;
  return doc.dump(2);
}

ZeroPair zero_eigvec_pair(const LaplacianSystem& sys) {
  const int n = sys.size();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "empty system");
  if (!is_strongly_connected(DirectedGraph(sys.A)))
    throw Error(ErrorCode::NotStronglyConnected,
                "zero eigenvector pair requires a strongly connected graph");

  ZeroPair zp;
  zp.phi = Vector::Ones(n);
  if (n == 1) {
    zp.psi = Vector::Ones(1);
    return zp;
  }
  Eigen::JacobiSVD<Matrix> svd(sys.L, Eigen::ComputeFullU);
  const Vector sv = svd.singularValues();
  const double scale = std::max(1.0, sv[0]);
  if (sv[n - 1] > 1e-9 * scale || (n > 1 && sv[n - 2] < 1e-9 * scale))
    throw Error(ErrorCode::NonConvergence,
                "Laplacian kernel is not one-dimensional numerically");
  Vector psi = svd.matrixU().col(n - 1);
  const double total = psi.sum();
  if (std::abs(total) < 1e-12)
    throw Error(ErrorCode::NonConvergence, "left zero eigenvector sums to zero");
  psi /= total;
  if (psi.minCoeff() < -1e-9)
    throw Error(ErrorCode::NonConvergence,
                "left zero eigenvector is not positive; graph may be close to reducible");
  zp.psi = psi;
  return zp;
}

double undelayed_spectral_abscissa(const LaplacianSystem& sys,
                                   const PinSet& pins, double c) {
  if (pins.dimension() != sys.size())
    throw Error(ErrorCode::InvalidArgument,
                "pin set dimension does not match the system");
  Matrix m = -(sys.L + c * pins.diagonal());
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::NonConvergence, "eigenvalue iteration failed");
  return es.eigenvalues().real().maxCoeff();
}

}  // namespace pindelay
