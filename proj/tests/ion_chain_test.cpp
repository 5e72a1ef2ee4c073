#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "ionfield/gaussian.hpp"
#include "ionfield/ion_chain.hpp"
#include "oracles.hpp"

using namespace ionfield;
using namespace ionfield::ion_chain;

TEST_CASE("equilibrium closed forms for N = 1, 2, 3") {
  CHECK(solve_equilibrium(1)(0) == 0.0);
  const Vector z2 = solve_equilibrium(2);
  CHECK(std::abs(z2(1) - std::cbrt(2.0) / 2) < 1e-10);
  CHECK(std::abs(z2(0) + std::cbrt(2.0) / 2) < 1e-10);
  const Vector z3 = solve_equilibrium(3);
  CHECK(std::abs(z3(2) - std::cbrt(10.0) / 2) < 1e-10);
  CHECK(std::abs(z3(1)) < 1e-10);
}

TEST_CASE("N = 4 equilibrium agrees with gradient descent from random starts") {
  const Vector z = solve_equilibrium(4);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd ref = oracle::ion_equilibrium_descent(4, seed);
    CHECK((z - ref).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("gradient matches finite differences and vanishes at equilibrium") {
  Vector z(3);
  z << -1.3, 0.2, 0.9;
  const Vector g = potential_gradient(z);
  for (int i = 0; i < 3; ++i) {
    Vector zp = z, zm = z;
    const double h = 1e-6;
    zp(i) += h;
    zm(i) -= h;
    CHECK(g(i) == doctest::Approx((potential(zp) - potential(zm)) / (2 * h)).epsilon(1e-7));
  }
  for (int n : {2, 10, 50, 150, 300}) {
    const Vector e = solve_equilibrium(n);
    CHECK(potential_gradient(e).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, 2 * e.cwiseAbs().maxCoeff()));
    CHECK((e + e.reverse()).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 1; i < n; ++i) CHECK(e(i) > e(i - 1));
  }
}

TEST_CASE("spacings grow from the centre outwards") {
  for (int n : {5, 6, 20, 151}) {
    const Vector z = solve_equilibrium(n);
    const Vector gaps = z.tail(n - 1) - z.head(n - 1);
    const int mid = (n - 1) / 2;
    for (int i = mid; i + 1 < n - 1; ++i) CHECK(gaps(i + 1) > gaps(i) - 1e-12);
    for (int i = mid; i > 0; --i) CHECK(gaps(i - 1) > gaps(i) - 1e-12);
  }
}

TEST_CASE("Hessian spectra for N = 1, 2, 3") {
  CHECK(build_hessian(solve_equilibrium(1))(0, 0) == 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> h2(build_hessian(solve_equilibrium(2)));
  CHECK(std::abs(h2.eigenvalues()(0) - 1) < 1e-10);
  CHECK(std::abs(h2.eigenvalues()(1) - 3) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> h3(build_hessian(solve_equilibrium(3)));
  CHECK(std::abs(h3.eigenvalues()(2) - 29.0 / 5) < 1e-10);
  Vector bad(2);
  bad << 0.5, 0.5;
  CHECK_THROWS_AS(build_hessian(bad), std::invalid_argument);
}

TEST_CASE("normal modes") {
  const auto m2 = build_model(2);
  CHECK(std::abs(m2.frequencies(1) - std::sqrt(3.0)) < 1e-10);
  CHECK(std::abs(std::abs(m2.modes(0, 0)) - 1 / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(m2.modes(1, 0) + m2.modes(1, 1)) < 1e-10);

  const auto m3 = build_model(3);
  CHECK(std::abs(m3.frequencies(2) - std::sqrt(29.0 / 5)) < 1e-10);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(m3.modes(0, i) - 1 / std::sqrt(3.0)) < 1e-10);

  for (int n : {4, 30, 150}) {
    const auto m = build_model(n);
    CHECK(std::abs(m.frequencies(0) - 1) < 1e-10);
    CHECK(std::abs(m.frequencies(1) - std::sqrt(3.0)) < 1e-9);
    CHECK((m.modes.row(0).array() - 1 / std::sqrt(double(n))).abs().maxCoeff() < 1e-10);
    const Matrix diag = m.modes * m.hessian * m.modes.transpose();
    CHECK((diag - Matrix(m.frequencies.array().square().matrix().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
  }
  Matrix unstable(2, 2);
  unstable << 1, 2, 2, 1;
  CHECK_THROWS_AS(normal_modes(unstable), std::invalid_argument);
}

TEST_CASE("local-mode covariance closed forms") {
  const double s3 = std::sqrt(3.0), s145 = std::sqrt(145.0);
  const auto c2 = local_mode_cm(build_model(2));
  CHECK(std::abs(c2(0, 0) - (3 + s3) / 6) < 1e-10);
  CHECK(std::abs(c2(0, 2) - (3 - s3) / 6) < 1e-10);
  CHECK(std::abs(c2(1, 1) - (1 + s3) / 2) < 1e-10);
  CHECK(std::abs(c2(1, 3) - (1 - s3) / 2) < 1e-10);
  CHECK(c2(0, 1) == 0.0);

  const auto c3 = local_mode_cm(build_model(3));
  CHECK(std::abs(c3(0, 0) - (29 * s3 + s145 + 58) / 174) < 1e-10);
  CHECK(std::abs(c3(0, 2) - (1.0 / 3 - std::sqrt(5.0 / 29) / 3)) < 1e-10);
  CHECK(std::abs(c3(0, 4) - (-29 * s3 + s145 + 58) / 174) < 1e-10);
  CHECK(std::abs(c3(1, 1) - (15 * s3 + s145 + 10) / 30) < 1e-10);
  CHECK(std::abs(c3(1, 3) - (5 - s145) / 15) < 1e-10);
  CHECK(std::abs(c3(3, 3) - (2 * s145 + 5) / 15) < 1e-10);
  CHECK(std::abs(c3(2, 2) - (1.0 / 3 + 2 * std::sqrt(5.0 / 29) / 3)) < 1e-10);
}

TEST_CASE("ground state is pure and physical") {
  for (int n : {2, 10, 50}) {
    const auto c = local_mode_cm(build_model(n));
    const Vector nu = gaussian::symplectic_spectrum(c);
    CHECK((nu.array() - 1).abs().maxCoeff() < 1e-9);
    CHECK(std::abs(c.matrix().determinant() - 1) < 1e-8);
    CHECK(c.is_physical(1e-9));
  }
}

TEST_CASE("physical scales") {
  const auto yb = ytterbium171_scales(1e6);
  CHECK(yb.zero_point_length == doctest::Approx(7.7e-9).epsilon(0.01));
  CHECK(yb.spacing_length == doctest::Approx(2.7e-6).epsilon(0.02));
  CHECK(yb.length_ratio() == doctest::Approx(2.8e-3).epsilon(0.02));
  CHECK(yb.omega_z * yb.omega_z == doctest::Approx(2 * yb.charge * yb.trap_strength / yb.mass).epsilon(1e-12));

  // ℓ³ ∝ q/κ₂ at fixed trap strength, ∝ q² at fixed frequency
  const auto fixed_kappa = compute_scales(4 * yb.charge, yb.mass, yb.trap_strength, std::nullopt);
  CHECK(fixed_kappa.spacing_length / yb.spacing_length == doctest::Approx(std::cbrt(4.0)).epsilon(1e-12));
  const auto fixed_omega = compute_scales(4 * yb.charge, yb.mass, std::nullopt, yb.omega_z);
  CHECK(fixed_omega.spacing_length / yb.spacing_length == doctest::Approx(std::cbrt(16.0)).epsilon(1e-12));
  CHECK(fixed_omega.zero_point_length == doctest::Approx(yb.zero_point_length).epsilon(1e-12));
  CHECK_THROWS_AS(compute_scales(yb.charge, yb.mass, std::nullopt, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(compute_scales(yb.charge, yb.mass, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_scales(-1.0, yb.mass, 1.0, std::nullopt), std::invalid_argument);
}

TEST_CASE("chain size limits") {
  CHECK_THROWS_AS(solve_equilibrium(0), std::invalid_argument);
  CHECK_THROWS_AS(build_model(kMaxIons + 1), std::invalid_argument);
}
