#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "helpers.hpp"
#include "pindelay/lambert.hpp"

using namespace pindelay;
using testutil::Rng;

namespace {

double defect(int k, Complex z) {
  const Complex w = lambert_w(k, z);
  return std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z));
}

}  // namespace

TEST_SUITE_BEGIN("lambert");

TEST_CASE("principal branch reference values") {
  CHECK(lambert_w(0, Complex(0.0, 0.0)) == Complex(0.0, 0.0));
  CHECK(lambert_w(0, Complex(std::numbers::e, 0.0)).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lambert_w(0, Complex(-0.2, 0.0)).real() ==
        doctest::Approx(-0.2591711018190738).epsilon(1e-12));
  CHECK(lambert_w(-1, Complex(-0.2, 0.0)).real() ==
        doctest::Approx(-2.5426413577735265).epsilon(1e-12));
  // W_0(1) is the omega constant
  CHECK(lambert_w(0, Complex(1.0, 0.0)).real() ==
        doctest::Approx(0.5671432904097838).epsilon(1e-12));
}

TEST_CASE("defining equation holds across branches and magnitudes") {
  Rng rng(444);
  for (int rep = 0; rep < 300; ++rep) {
    const int k = rng.below(11) - 5;
    const double radius = std::exp(rng.uniform(-4.0, 4.0));
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Complex z = std::polar(radius, angle);
    if (k != 0 && std::abs(z) < 1e-12) continue;
    CHECK(defect(k, z) < 1e-9);
  }
}

TEST_CASE("branch point neighborhood stays accurate") {
  const double e = std::numbers::e;
  CHECK(lambert_w(0, Complex(-1.0 / e, 0.0)).real() ==
        doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(lambert_w(-1, Complex(-1.0 / e, 0.0)).real() ==
        doctest::Approx(-1.0).epsilon(1e-5));
  Rng rng(555);
  for (int rep = 0; rep < 50; ++rep) {
    const Complex z = Complex(-1.0 / e, 0.0) +
                      std::polar(rng.uniform(1e-6, 0.25),
                                 rng.uniform(0.0, 2.0 * std::numbers::pi));
    CHECK(defect(0, z) < 1e-9);
    CHECK(defect(-1, z) < 1e-9);
  }
}

TEST_CASE("branches land in their imaginary bands") {
  // The branch cuts are the curves -t cot(t) + i t; between consecutive cuts
  // the image of branch k spans an asymmetric strip roughly 3 pi tall, not
  // the naive band of half-width pi around 2 pi k.
  const double pi = std::numbers::pi;
  const auto lo = [&](int k) {
    if (k == 0) return -pi;
    return k > 0 ? 2.0 * (k - 1) * pi : (2.0 * k - 1.0) * pi;
  };
  const auto hi = [&](int k) {
    if (k == 0) return pi;
    return k > 0 ? (2.0 * k + 1.0) * pi : 2.0 * (k + 1) * pi;
  };
  Rng rng(666);
  for (int rep = 0; rep < 100; ++rep) {
    const int k = rng.below(9) - 4;
    const Complex z = std::polar(std::exp(rng.uniform(-2.0, 2.0)),
                                 rng.uniform(0.0, 2.0 * std::numbers::pi));
    const Complex w = lambert_w(k, z);
    CHECK(w.imag() > lo(k) - 0.2);
    CHECK(w.imag() < hi(k) + 0.2);
  }
}

TEST_CASE("branches are pairwise distinct") {
  Rng rng(667);
  for (int rep = 0; rep < 10; ++rep) {
    const Complex z = std::polar(std::exp(rng.uniform(-1.0, 2.0)),
                                 rng.uniform(0.0, 2.0 * std::numbers::pi));
    // branches 0 and +-1 genuinely coalesce at the -1/e branch point
    if (std::abs(z - Complex(-1.0 / std::numbers::e, 0.0)) < 0.25) continue;
    std::vector<Complex> ws;
    for (int k = -6; k <= 6; ++k) ws.push_back(lambert_w(k, z));
    for (std::size_t a = 0; a < ws.size(); ++a)
      for (std::size_t b = a + 1; b < ws.size(); ++b)
        CHECK(std::abs(ws[a] - ws[b]) > 1.0);
  }
}

TEST_CASE("real arguments invert the real function") {
  Rng rng(777);
  for (int rep = 0; rep < 60; ++rep) {
    // W_0(x e^x) = x for x >= -1
    const double x = rng.uniform(-1.0, 3.0);
    const Complex back = lambert_w(0, Complex(x * std::exp(x), 0.0));
    CHECK(back.real() == doctest::Approx(x).epsilon(1e-8));
    CHECK(std::abs(back.imag()) < 1e-9);
  }
  for (int rep = 0; rep < 60; ++rep) {
    // W_{-1}(x e^x) = x for x <= -1
    const double x = rng.uniform(-8.0, -1.0);
    const Complex back = lambert_w(-1, Complex(x * std::exp(x), 0.0));
    CHECK(back.real() == doctest::Approx(x).epsilon(1e-8));
    CHECK(std::abs(back.imag()) < 1e-9);
  }
}

TEST_CASE("conjugation swaps branch sign") {
  Rng rng(888);
  for (int rep = 0; rep < 60; ++rep) {
    const int k = rng.below(7) - 3;
    Complex z = std::polar(std::exp(rng.uniform(-1.0, 2.0)),
                           rng.uniform(0.1, std::numbers::pi - 0.1));
    const Complex a = lambert_w(k, z);
    const Complex b = lambert_w(-k, std::conj(z));
    CHECK(std::abs(a - std::conj(b)) < 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("far branches keep a usable residual") {
  for (int k : {25, -25, 300, -300}) {
    for (const Complex z : {Complex(2.06, 0.0), Complex(-0.4, 1.3),
                            Complex(0.01, -0.02)}) {
      const Complex w = lambert_w(k, z);
      // noise floor scales with |Im w| ~ 2 pi |k|
      const double floor =
          1e-11 * std::max(1.0, std::abs(w)) * std::max(1.0, std::abs(z));
      CHECK(std::abs(w * std::exp(w) - z) <= floor);
    }
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(lambert_w(1, Complex(0.0, 0.0)), Error);
  CHECK_THROWS_AS(lambert_w(-1, Complex(0.0, 0.0)), Error);
}

TEST_SUITE_END();
