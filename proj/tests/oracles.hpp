#pragma once

// Reference implementations used only by the tests. Each one takes a route
// unrelated to the library code it checks.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

// Pair index 0 with every partner, recurse on the rest.
inline double hafnian_recursive(const Matrix& b) {
  const Eigen::Index n = b.rows();
  if (n == 0) return 1.0;
  if (n % 2) return 0.0;
  double total = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 1; k < n; ++k)
      if (k != j) keep.push_back(k);
    Matrix sub(n - 2, n - 2);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t c = 0; c < keep.size(); ++c) sub(r, c) = b(keep[r], keep[c]);
    total += b(0, j) * hafnian_recursive(sub);
  }
  return total;
}

// haf(B) = 1/(2^{n/2} (n/2)!) Σ_{σ ∈ S_n} Π_i B_{σ(2i), σ(2i+1)}.
inline double hafnian_permutation(const Matrix& b) {
  const int n = static_cast<int>(b.rows());
  if (n == 0) return 1.0;
  if (n % 2) return 0.0;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double total = 0.0;
  do {
    double prod = 1.0;
    for (int i = 0; i < n; i += 2) prod *= b(p[i], p[i + 1]);
    total += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  double norm = std::tgamma(n / 2 + 1.0) * std::pow(2.0, n / 2);
  return total / norm;
}

// Scaling and squaring with a 30-term Taylor series.
inline Eigen::Matrix2d expm(const Eigen::Matrix2d& m) {
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2;
    ++squarings;
  }
  const Eigen::Matrix2d a = m / std::pow(2.0, squarings);
  Eigen::Matrix2d term = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Plain gradient descent with backtracking on the dimensionless ion
// potential, from a randomly perturbed start.
inline Eigen::VectorXd ion_equilibrium_descent(int n, unsigned seed) {
  auto energy = [](const Eigen::VectorXd& z) {
    double u = z.squaredNorm();
    for (int i = 0; i < z.size(); ++i)
      for (int j = 0; j < z.size(); ++j)
        if (i != j) u += 1.0 / std::abs(z(i) - z(j));
    return u;
  };
  auto grad = [](const Eigen::VectorXd& z) {
    Eigen::VectorXd g = 2.0 * z;
    for (int i = 0; i < z.size(); ++i)
      for (int j = 0; j < z.size(); ++j)
        if (i != j) {
          const double d = z(i) - z(j);
          g(i) -= 2.0 * (d > 0 ? 1.0 : -1.0) / (d * d);
        }
    return g;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = (i - (n - 1) / 2.0) + jitter(rng);
  // Backtracking while the energy still resolves the decrease, then a fixed
  // step below 2 / (largest curvature) for the last digits.
  double step = 0.1;
  for (int it = 0; it < 200000; ++it) {
    const Eigen::VectorXd g = grad(z);
    if (g.cwiseAbs().maxCoeff() < 1e-6) break;
    const double u = energy(z);
    Eigen::VectorXd trial = z - step * g;
    while (energy(trial) > u && step > 1e-16) {
      step *= 0.5;
      trial = z - step * g;
    }
    z = trial;
    step *= 1.5;
  }
  const double fixed = 1.0 / (2.0 + 8.0 * n * n);
  for (int it = 0; it < 10000000; ++it) {
    const Eigen::VectorXd g = grad(z);
    if (g.cwiseAbs().maxCoeff() < 1e-13) break;
    z -= fixed * g;
  }
  std::sort(z.data(), z.data() + n);
  return z;
}

// Root fidelity of single-mode thermal states with mean occupations a, b.
inline double thermal_fidelity(double a, double b) {
  return 1.0 / (std::sqrt((a + 1) * (b + 1)) - std::sqrt(a * b));
}

// ∫ψ₀(x)ψ_z(x)dx for the vacuum and a position-squeezed vacuum of width z,
// by the trapezoid rule (spectrally accurate for Gaussians).
inline double squeezed_vacuum_overlap(double z, int points = 20001) {
  const double half_width = 40.0 * std::max(z, 1.0);
  const double h = 2 * half_width / (points - 1);
  const double norm = 1.0 / std::sqrt(std::sqrt(std::acos(-1.0)));
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = -half_width + i * h;
    const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    sum += w * norm * std::exp(-x * x / 2) * norm / std::sqrt(z) * std::exp(-x * x / (2 * z * z));
  }
  return sum * h;
}

// von Neumann entropy (bits) of one half of a TMSV from its Schmidt weights.
inline double tmsv_entropy_fock(double r, int terms = 400) {
  const double c2 = std::cosh(r) * std::cosh(r);
  const double t2 = std::tanh(r) * std::tanh(r);
  double s = 0.0;
  double p = 1.0 / c2;
  for (int n = 0; n < terms && p > 0; ++n) {
    s -= p * std::log2(p);
    p *= t2;
  }
  return s;
}

}  // namespace oracle
