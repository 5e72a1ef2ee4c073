#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ionfield/gaussian.hpp"
#include "ionfield/scalar_field.hpp"

using namespace ionfield;
using namespace ionfield::scalar_field;
using gaussian::Quadrature;

namespace {
ScalarFieldSpec window(int w) { return ScalarFieldSpec{kMasslessRegime, w}; }
}  // namespace

TEST_CASE("massless momentum correlator closed form") {
  for (int d = 0; d <= 12; ++d) {
    const double exact = -4.0 / (std::numbers::pi * (4.0 * d * d - 1));
    CHECK(std::abs(pi_correlator(kMasslessRegime, d) - exact) < 1e-10);
  }
  for (int d = 5; d <= 40; ++d) {
    const double scaled = pi_correlator(kMasslessRegime, d) * (-std::numbers::pi * d * d);
    CHECK(std::abs(scaled - 1) < 0.05);
  }
}

TEST_CASE("massive correlators against direct quadrature") {
  // Midpoint rule on a smooth periodic integrand converges geometrically.
  const double m = 0.7;
  for (int d : {0, 1, 3, 7}) {
    const int n = 4096;
    double phi = 0, pi = 0;
    for (int i = 0; i < n; ++i) {
      const double k = -std::numbers::pi + (i + 0.5) * 2 * std::numbers::pi / n;
      const double w = std::sqrt(m * m + 4 * std::sin(k / 2) * std::sin(k / 2));
      phi += std::cos(k * d) / w / n;
      pi += std::cos(k * d) * w / n;
    }
    CHECK(std::abs(phi_correlator(m, d) - phi) < 1e-11);
    CHECK(std::abs(pi_correlator(m, d) - pi) < 1e-11);
  }
}

TEST_CASE("field correlator grows like log(1/m) at small mass") {
  const double a = phi_correlator(1e-6, 0), b = phi_correlator(1e-8, 0);
  CHECK((b - a) == doctest::Approx(std::log(100.0) / std::numbers::pi).epsilon(1e-4));
  CHECK(phi_correlator(kMasslessRegime, 0) - phi_correlator(kMasslessRegime, 1) ==
        doctest::Approx(2 / std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("vacuum covariance is Toeplitz, physical and nested") {
  const auto c5 = scalar_vacuum_cm(window(5));
  const auto c6 = scalar_vacuum_cm(window(6));
  CHECK(c5.is_physical(1e-9));
  CHECK((c6.matrix().topLeftCorner(10, 10) - c5.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const auto phi = c6.quadrature_block(Quadrature::phi);
  const auto pi = c6.quadrature_block(Quadrature::pi);
  for (int i = 0; i + 1 < 6; ++i)
    for (int j = 0; j + 1 < 6; ++j) {
      CHECK(phi(i, j) == phi(i + 1, j + 1));
      CHECK(pi(i, j) == pi(i + 1, j + 1));
    }
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(c6(2 * i, 2 * j + 1) == 0.0);
  CHECK_THROWS_AS(scalar_vacuum_cm(window(0)), std::invalid_argument);
  CHECK_THROWS_AS(scalar_vacuum_cm(ScalarFieldSpec{-1.0, 3}), std::invalid_argument);
}

TEST_CASE("adjacent sites of the vacuum") {
  const auto c = scalar_vacuum_cm(window(2));
  const std::vector<int> a{0}, b{1};
  CHECK(gaussian::log_negativity(c, a, b) == doctest::Approx(0.44398).epsilon(1e-4));
}

TEST_CASE("exact exterior conditioning matches growing finite buffers for phi") {
  const auto spec = window(4);
  const std::vector<int> sites{0, 3};
  const auto exact = condition_exterior(spec, sites, Quadrature::phi);
  CHECK(exact.is_physical(1e-9));
  double previous = 1e9;
  for (int buffer : {4, 16, 64}) {
    const auto approx = condition_with_buffer(spec, sites, Quadrature::phi, buffer);
    const double err = (approx.matrix() - exact.matrix()).cwiseAbs().maxCoeff();
    CHECK(err <= previous);
    previous = err;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("conditioned blocks are mutually inverse") {
  const auto spec = window(5);
  const std::vector<int> sites{0, 4};
  const auto c = condition_exterior(spec, sites, Quadrature::pi);
  const auto vac = scalar_vacuum_cm(spec);
  // pi measured: the retained pi block becomes the inverse of the phi block.
  Eigen::Matrix2d phi_block, pi_block;
  phi_block << vac(0, 0), vac(0, 8), vac(8, 0), vac(8, 8);
  pi_block << c(1, 1), c(1, 3), c(3, 1), c(3, 3);
  CHECK((phi_block * pi_block - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(c(0, 0) == doctest::Approx(vac(0, 0)));
  CHECK(c.is_physical(1e-9));
  const auto pure = condition_exterior(spec, sites, Quadrature::phi);
  CHECK((gaussian::symplectic_spectrum(pure).array() - 1).abs().maxCoeff() < 1e-8);
}
