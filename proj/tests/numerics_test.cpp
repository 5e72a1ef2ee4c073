#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "generators.hpp"
#include "ionfield/error.hpp"
#include "ionfield/numerics.hpp"
#include "oracles.hpp"

using namespace ionfield::numerics;
using ionfield::NumericalError;

TEST_CASE("sym_eigen small cases") {
  const auto id = sym_eigen(Matrix::Identity(3, 3));
  CHECK(id.eigenvalues.isApprox(Vector::Ones(3)));

  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto s = sym_eigen(m);
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("sym_eigen against Eigen's solver, random 50x50") {
  std::mt19937_64 rng(11);
  const Matrix m = gen::symmetric(rng, 50);
  const auto s = sym_eigen(m);
  const Matrix recon = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
  CHECK(max_abs(recon - m) <= 1e-10 * max_abs(m));
  CHECK(max_abs(s.eigenvectors.transpose() * s.eigenvectors - Matrix::Identity(50, 50)) <= 1e-12);

  Eigen::SelfAdjointEigenSolver<Matrix> ref(m);
  CHECK(max_abs(s.eigenvalues - ref.eigenvalues()) <= 1e-11 * max_abs(m));
  for (Eigen::Index k = 1; k < 50; ++k) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
  for (Eigen::Index k = 0; k < 50; ++k) {
    Eigen::Index at = 0;
    s.eigenvectors.col(k).cwiseAbs().maxCoeff(&at);
    CHECK(s.eigenvectors(at, k) > 0);
  }
}

TEST_CASE("sym_eigen of a direct sum is the union of spectra") {
  std::mt19937_64 rng(12);
  const Matrix a = gen::symmetric(rng, 4), b = gen::symmetric(rng, 3);
  Matrix ab = Matrix::Zero(7, 7);
  ab.topLeftCorner(4, 4) = a;
  ab.bottomRightCorner(3, 3) = b;
  Vector both(7);
  both << sym_eigen(a).eigenvalues, sym_eigen(b).eigenvalues;
  std::sort(both.data(), both.data() + 7);
  CHECK(max_abs(sym_eigen(ab).eigenvalues - both) <= 1e-12);
}

TEST_CASE("sym_eigen rejects asymmetric input") {
  Matrix m(2, 2);
  m << 1, 2, 2.1, 1;
  CHECK_THROWS_AS(sym_eigen(m), std::invalid_argument);
}

TEST_CASE("principal_sqrt examples") {
  CHECK(max_abs(principal_sqrt(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)) < 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4;
  d(1, 1) = 9;
  const Matrix r = principal_sqrt(d);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("Denman-Beavers matches the eigen route on random SPD 10x10") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix m = gen::spd(rng, 10);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Matrix ref = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    CHECK(max_abs(denman_beavers_sqrt(m) - ref) <= 1e-9 * max_abs(ref));
  }
}

TEST_CASE("principal_sqrt squared reproduces 100 random SPD inputs") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + rep % 9;
    const Matrix m = gen::spd(rng, n);
    const Matrix r = principal_sqrt(m);
    CHECK(max_abs(r * r - m) <= 1e-9 * max_abs(m));
  }
}

TEST_CASE("Denman-Beavers on a non-symmetric matrix with positive spectrum") {
  Matrix m(3, 3);
  m << 4, 1, 0, 0, 9, 2, 1, 0, 16;
  const Matrix r = principal_sqrt(m);
  CHECK(max_abs(r * r - m) <= 1e-10 * max_abs(m));
  Eigen::EigenSolver<Matrix> es(r);
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(es.eigenvalues()(k).real() > 0);
}

TEST_CASE("Denman-Beavers reports failure on -I") {
  CHECK_THROWS_AS(denman_beavers_sqrt(-Matrix::Identity(2, 2)), NumericalError);
}

TEST_CASE("inverse and determinants") {
  Matrix m(2, 2);
  m << 2, 1, 1, 3;
  CHECK(determinant(m) == doctest::Approx(5.0));
  CHECK(max_abs(inverse(m) * m - Matrix::Identity(2, 2)) < 1e-15);
  const auto [lg, sign] = log_abs_determinant(-m);
  CHECK(lg == doctest::Approx(std::log(5.0)));
  CHECK(sign == 1);
  CHECK_THROWS_AS(inverse(Matrix::Zero(2, 2)), NumericalError);
}

TEST_CASE("hafnian special cases") {
  CHECK(hafnian(Matrix(0, 0)) == 1.0);
  CHECK(hafnian(Matrix::Ones(3, 3)) == 0.0);
  CHECK(hafnian(Matrix::Ones(4, 4)) == doctest::Approx(3.0));
  CHECK(hafnian(Matrix::Ones(6, 6)) == doctest::Approx(15.0));
  CHECK_THROWS_AS(hafnian(Matrix::Ones(26, 26)), std::invalid_argument);
}

TEST_CASE("hafnian matches both oracles on random 6x6") {
  std::mt19937_64 rng(15);
  const Matrix b = gen::symmetric(rng, 6);
  CHECK(hafnian(b) == doctest::Approx(oracle::hafnian_recursive(b)).epsilon(1e-12));
  CHECK(hafnian(b) == doctest::Approx(oracle::hafnian_permutation(b)).epsilon(1e-12));
}

TEST_CASE("hafnian is linear in a scaled row and column pair") {
  std::mt19937_64 rng(16);
  for (int n : {4, 6}) {
    Matrix b = gen::symmetric(rng, n);
    const double h = hafnian(b);
    b.row(1) *= 2.5;
    b.col(1) *= 2.5;
    b(1, 1) /= 2.5;  // the diagonal never enters a matching
    CHECK(hafnian(b) == doctest::Approx(2.5 * h).epsilon(1e-12));
  }
}

TEST_CASE("RepeatedHafnian equals the hafnian of the expanded matrix") {
  std::mt19937_64 rng(17);
  const Matrix a = gen::symmetric(rng, 4);
  RepeatedHafnian rep{Eigen::MatrixXcd(a.cast<std::complex<double>>())};
  for (const std::vector<int>& mult : std::vector<std::vector<int>>{{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 0, 1, 1}, {3, 1, 2, 0}, {2, 2, 2, 2}, {1, 0, 0, 0}}) {
    std::vector<Eigen::Index> idx;
    for (int j = 0; j < 4; ++j)
      for (int c = 0; c < mult[static_cast<std::size_t>(j)]; ++c) idx.push_back(j);
    Matrix expanded(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) expanded(r, c) = a(idx[r], idx[c]);
    const auto h = rep(mult);
    CHECK(h.real() == doctest::Approx(oracle::hafnian_recursive(expanded)).epsilon(1e-12));
    CHECK(std::abs(h.imag()) < 1e-14);
  }
  CHECK(rep.cache_size() > 0);
}

TEST_CASE("integrate_panels and quad_oscillatory") {
  CHECK(integrate_panels([](double x) { return std::sin(x); }, 0, std::numbers::pi, 4) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad_oscillatory([](double) { return 1.0; }, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(quad_oscillatory([](double k) { return std::cos(5 * k); }, 5)) < 1e-14);
  CHECK(std::abs(quad_oscillatory([](double k) { return 2 * std::abs(std::sin(k / 2)); }, 0) - 4 / std::numbers::pi) < 1e-12);
}

TEST_CASE("maximize_1d") {
  const auto a = maximize_1d([](double x) { return -(x - 2) * (x - 2); }, 0, 5, 1e-8);
  CHECK(a.argmax == doctest::Approx(2.0).epsilon(1e-7));
  const auto b = maximize_1d([](double x) { return std::sin(x); }, 0, std::numbers::pi, 1e-8);
  CHECK(b.argmax == doctest::Approx(std::numbers::pi / 2).epsilon(1e-7));
  const auto c = maximize_1d([](double x) { return -(x - 1.5) * (x - 1.5); }, 0, 1, 1e-8);
  CHECK(c.argmax == doctest::Approx(1.5).epsilon(1e-7));
  const auto d = maximize_1d([](double x) { return -std::abs(x - 0.3); }, 0, 1, 1e-6);
  CHECK(d.evaluations <= 202);
  CHECK_THROWS_AS(maximize_1d([](double x) { return x; }, 0, 1, 1e-6), NumericalError);
}

TEST_CASE("elliptic_k_complement") {
  CHECK(elliptic_k_complement(1.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic_k_complement(std::sqrt(0.5)) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  const double kp = 1e-10;
  CHECK(elliptic_k_complement(kp) == doctest::Approx(std::log(4 / kp)).epsilon(1e-12));
}
