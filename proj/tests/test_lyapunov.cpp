#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pindelay/charroots.hpp"
#include "pindelay/lyapunov.hpp"
#include "pindelay/spectral.hpp"

using namespace pindelay;
using testutil::Rng;

namespace {

PinningProblem scalar_pinned(double c, double tau_r, double tau_p) {
  return PinningProblem(laplacian(testutil::singleton()), PinSet::all(1), c,
                        tau_r, tau_p);
}

}  // namespace

TEST_SUITE_BEGIN("lyapunov");

TEST_CASE("scalar delayed feedback rate matches the dominant root") {
  const PinningProblem problem = scalar_pinned(1.0, 0.0, 0.2);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(1, 5), 200, 32);
  CHECK(est.method == ExponentMethod::SegmentNorms);
  CHECK(std::abs(est.value - (-1.2958555090953685)) < 1e-2);
  CHECK(est.segments_used > 0);
  CHECK(est.segment_length == doctest::Approx(0.2));
}

TEST_CASE("scalar boundary rate is near zero") {
  const PinningProblem problem =
      scalar_pinned(1.0, 0.0, 0.5 * std::numbers::pi);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(1, 5), 200, 32);
  CHECK(std::abs(est.value) < 2e-2);
}

TEST_CASE("unpinned consensus rate is the zero mode") {
  Rng rng(333);
  const DirectedGraph g =
      testutil::random_strongly_connected(rng, 4, 0.7, false);
  const PinningProblem problem(laplacian(g), PinSet({}, 4), 0.0, 0.4, 0.0);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(4, 6), 200, 32);
  CHECK(std::abs(est.value) < 2e-2);
}

TEST_CASE("zero delays fall back to the matrix spectral abscissa") {
  const LaplacianSystem sys = laplacian(testutil::complete_graph(4));
  const PinningProblem problem(sys, PinSet::single(0, 4), 1.0, 0.0, 0.0);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(4, 7), 100, 16);
  CHECK(est.method == ExponentMethod::SpectralAbscissa);
  CHECK(est.value ==
        doctest::Approx(undelayed_spectral_abscissa(sys, PinSet::single(0, 4),
                                                    1.0))
            .epsilon(1e-9));
}

TEST_CASE("estimates agree with charroots on a mixed-delay network") {
  const LaplacianSystem sys = laplacian(testutil::complete_graph(3));
  const PinSet pins = PinSet::first(1, 3);
  const PinningProblem problem(sys, pins, 0.8, 0.3, 0.15);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(3, 8), 300, 32);
  const CharRoot dom = dominant_root(QuasiPoly::from_problem(problem));
  CHECK(std::abs(est.value - dom.lambda.real()) < 1e-2);
  CHECK(est.converged);
}

TEST_CASE("an unstable configuration reports a positive rate") {
  const PinningProblem problem = scalar_pinned(1.0, 0.0, 2.5);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(1, 9), 200, 32);
  const CharRoot dom = dominant_root(QuasiPoly::from_problem(problem));
  CHECK(dom.lambda.real() > 0.0);
  CHECK(est.value > 0.0);
  CHECK(std::abs(est.value - dom.lambda.real()) < 1e-2);
}

TEST_CASE("identically zero history is rejected") {
  const PinningProblem problem = scalar_pinned(1.0, 0.0, 0.2);
  CHECK_THROWS_AS(largest_exponent(problem,
                                   HistoryFunction::constant(Vector::Zero(1)),
                                   100, 16),
                  Error);
}

TEST_CASE("segment bookkeeping is reported") {
  const PinningProblem problem = scalar_pinned(1.0, 0.1, 0.3);
  const ExponentEstimate est = largest_exponent(
      problem, HistoryFunction::random_constant(1, 10), 120, 24);
  CHECK(est.segment_length == doctest::Approx(0.3));  // max delay
  CHECK(est.samples_per_segment == 24);
  CHECK(est.segments_used <= 120);
  CHECK(static_cast<int>(est.segment_logs.size()) >= est.segments_used);
}

TEST_SUITE_END();
