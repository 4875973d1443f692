#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pindelay/charroots.hpp"
#include "pindelay/spectral.hpp"

using namespace pindelay;
using testutil::Rng;

namespace {

QuasiPoly scalar_pinned(double c, double tau_r, double tau_p) {
  const PinningProblem problem(laplacian(testutil::singleton()),
                               PinSet::all(1), c, tau_r, tau_p);
  return QuasiPoly::from_problem(problem);
}

}  // namespace

TEST_SUITE_BEGIN("charroots");

TEST_CASE("scalar delayed feedback root matches the closed form") {
  // lambda = -e^{-0.2 lambda}: lambda = W_0(-0.2) / 0.2
  const QuasiPoly qp = scalar_pinned(1.0, 0.0, 0.2);
  const CharRoot dom = dominant_root(qp);
  CHECK(dom.lambda.real() ==
        doctest::Approx(-1.2958555090953685).epsilon(1e-10));
  CHECK(std::abs(dom.lambda.imag()) < 1e-10);
  CHECK(dom.residual < 1e-9);
}

TEST_CASE("scalar boundary sits on the imaginary axis") {
  const QuasiPoly qp = scalar_pinned(1.0, 0.0, 0.5 * std::numbers::pi);
  const CharRoot dom = dominant_root(qp);
  CHECK(std::abs(dom.lambda.real()) < 1e-8);
  CHECK(std::abs(dom.lambda.imag()) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(verdict_from_root(dom).verdict == Verdict::Inconclusive);

  const QuasiPoly stable = scalar_pinned(1.0, 0.0, 1.4);
  CHECK(verdict_from_root(dominant_root(stable)).verdict == Verdict::Stable);
  const QuasiPoly unstable = scalar_pinned(1.0, 0.0, 1.7);
  CHECK(verdict_from_root(dominant_root(unstable)).verdict ==
        Verdict::Unstable);
}

TEST_CASE("unpinned consensus keeps the zero root") {
  Rng rng(808);
  const DirectedGraph g =
      testutil::random_strongly_connected(rng, 4, 0.6, false);
  const PinningProblem problem(laplacian(g), PinSet({}, 4), 0.0, 0.3, 0.0);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  CHECK(std::abs(chi(qp, Complex(0.0, 0.0))) < 1e-12);
  const CharRoot dom = dominant_root(qp);
  CHECK(std::abs(dom.lambda.real()) < 1e-8);
}

TEST_CASE("pinning removes the zero root") {
  const LaplacianSystem sys = laplacian(testutil::pair_graph());
  const PinningProblem problem(sys, PinSet::single(0, 2), 1.0, 0.1, 0.1);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  CHECK(std::abs(chi(qp, Complex(0.0, 0.0))) > 1e-3);
  const CharRoot dom = dominant_root(qp);
  CHECK(dom.lambda.real() < -1e-3);
}

TEST_CASE("zero delays reduce to the matrix spectral abscissa") {
  Rng rng(909);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 2 + rng.below(4);
    const DirectedGraph g =
        testutil::random_strongly_connected(rng, n, 0.6, rep % 2 == 1);
    const LaplacianSystem sys = laplacian(g);
    const PinSet pins = PinSet::single(rng.below(n), n);
    const double c = rng.uniform(0.2, 2.0);
    const PinningProblem problem(sys, pins, c, 0.0, 0.0);
    const CharRoot dom = dominant_root(QuasiPoly::from_problem(problem));
    const double reference = undelayed_spectral_abscissa(sys, pins, c);
    CHECK(dom.lambda.real() == doctest::Approx(reference).epsilon(1e-7));
  }
}

TEST_CASE("log derivative agrees with a finite difference") {
  const QuasiPoly qp = scalar_pinned(0.7, 0.0, 0.4);
  const Complex at(0.3, 0.9);
  const Complex h(1e-6, 0.0);
  const Complex fd =
      (std::log(chi(qp, at + h)) - std::log(chi(qp, at - h))) / (2.0 * h);
  CHECK(std::abs(chi_log_derivative(qp, at) - fd) < 1e-5);
}

TEST_CASE("matrix derivative agrees with a finite difference") {
  const LaplacianSystem sys = laplacian(testutil::complete_graph(3));
  const PinningProblem problem(sys, PinSet::single(1, 3), 0.8, 0.25, 0.15);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  const Complex at(-0.2, 0.5);
  const Complex h(1e-6, 0.0);
  const ComplexMatrix fd =
      (qp.matrix_at(at + h) - qp.matrix_at(at - h)) / (2.0 * h);
  CHECK((qp.derivative_at(at) - fd).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("found roots all satisfy the characteristic equation") {
  const LaplacianSystem sys = laplacian(testutil::complete_graph(4));
  const PinningProblem problem(sys, PinSet::first(2, 4), 1.5, 0.2, 0.35);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  const RootSearchRegion region = RootSearchRegion::defaults_for(qp);
  const std::vector<CharRoot> roots = find_roots(qp, region);
  REQUIRE(!roots.empty());
  double prev = 1e300;
  for (const CharRoot& r : roots) {
    CHECK(r.residual < 1e-8);
    CHECK(r.lambda.imag() >= -1e-12);  // conjugates are implied
    CHECK(r.lambda.real() <= prev + 1e-12);  // sorted by descending Re
    prev = r.lambda.real();
    CHECK(r.multiplicity_hint >= 1);
  }
  // the dominant entry is the top of the list
  const CharRoot dom = dominant_root(qp, region, RootSearchOptions{});
  CHECK(dom.lambda.real() ==
        doctest::Approx(roots.front().lambda.real()).epsilon(1e-8));
}

TEST_CASE("search region excludes nothing to the right") {
  // Gershgorin right border: every root has Re <= max_i (-K_i + |A| row + c)
  const LaplacianSystem sys = laplacian(testutil::pair_graph());
  const PinningProblem problem(sys, PinSet::single(0, 2), 2.0, 0.3, 0.2);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  const RootSearchRegion region = RootSearchRegion::defaults_for(qp);
  CHECK(region.sigma_hi >= 0.0);  // allows detecting instability
  const std::vector<CharRoot> roots = find_roots(qp, region);
  for (const CharRoot& r : roots) CHECK(r.lambda.real() <= region.sigma_hi + 1e-9);
}

TEST_CASE("transmission delay never destabilizes, pinning delay does") {
  // Only the neighbor term is delayed by tau_r, so axis crossings would
  // need |i omega + k| = |mu| <= k: impossible off omega = 0. The pinning
  // delay has a genuine critical value.
  const LaplacianSystem sys = laplacian(testutil::pair_graph());
  for (double tau_r : {0.0, 0.5, 2.5, 10.0}) {
    const PinningProblem problem(sys, PinSet::single(0, 2), 1.0, tau_r, 0.5);
    CHECK(verdict_from_root(dominant_root(QuasiPoly::from_problem(problem)))
              .verdict == Verdict::Stable);
  }
  // first crossing for a single pinned node sits near tau_p = 3.281
  const PinningProblem below(sys, PinSet::single(0, 2), 1.0, 0.0, 3.0);
  CHECK(verdict_from_root(dominant_root(QuasiPoly::from_problem(below)))
            .verdict == Verdict::Stable);
  const PinningProblem above(sys, PinSet::single(0, 2), 1.0, 0.0, 4.2);
  CHECK(verdict_from_root(dominant_root(QuasiPoly::from_problem(above)))
            .verdict == Verdict::Unstable);
}

TEST_SUITE_END();
