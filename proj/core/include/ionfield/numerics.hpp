#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace ionfield::numerics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenpairs of a real symmetric matrix. Eigenvalues ascend; column k of
/// `eigenvectors` pairs with eigenvalue k and has its largest-magnitude
/// component positive.
struct SymSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi eigendecomposition. Throws std::invalid_argument when the
/// input is not square or its relative asymmetry exceeds 1e-12.
SymSpectrum sym_eigen(const Matrix& m);

/// Q f(Λ) Qᵀ for a symmetric matrix.
Matrix sym_function(const SymSpectrum& spectrum, const std::function<double(double)>& f);

/// Principal square root. Symmetric inputs go through the eigendecomposition;
/// everything else uses the scaled Denman–Beavers iteration (tol 1e-12, at
/// most 100 iterations). Throws NumericalError with the final residual when
/// the iteration fails.
Matrix principal_sqrt(const Matrix& m);

/// Denman–Beavers alone, without the symmetric shortcut.
Matrix denman_beavers_sqrt(const Matrix& m, double tol = 1e-12, int max_iterations = 100);

Matrix inverse(const Matrix& m);
double determinant(const Matrix& m);
/// Natural log of |det m| and its sign, for determinants that over/underflow.
std::pair<double, int> log_abs_determinant(const Matrix& m);

double max_abs(const Matrix& m);
double asymmetry(const Matrix& m);

inline constexpr std::size_t kMaxHafnianDimension = 24;

/// Sum over perfect matchings of products of matched entries, by direct
/// enumeration. Zero for odd dimension, one for the empty matrix. Throws
/// std::invalid_argument above kMaxHafnianDimension.
double hafnian(const Matrix& b);

/// Hafnian of the matrix obtained by repeating row/column j of `a`
/// multiplicities[j] times. Evaluated by a memoised recursion over the
/// remaining multiplicity vector, so cost depends on the number of distinct
/// rows rather than the expanded dimension. Diagonal entries of `a` pair
/// distinct copies of the same index; no copy is ever paired with itself.
class RepeatedHafnian {
public:
  explicit RepeatedHafnian(Eigen::MatrixXcd a);

  std::complex<double> operator()(std::span<const int> multiplicities);

  std::size_t cache_size() const noexcept { return cache_.size(); }

private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept;
  };

  std::complex<long double> evaluate(std::vector<int>& remaining);

  Eigen::MatrixXcd a_;
  std::unordered_map<std::vector<int>, std::complex<long double>, KeyHash> cache_;
};

/// Composite 61-point Gauss–Kronrod over [a, b] split into `panels` equal
/// pieces. Throws NumericalError when the summed error estimate exceeds
/// `abs_tol`.
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        double abs_tol = 1e-12);

/// ∫_{-π}^{π} f(k) dk / 2π for an even integrand whose only irregularity is
/// at k = 0. The interval is folded onto [0, π] and split into
/// 32·max(1, |harmonic|) panels, each allowed an estimated error of 1e-11.
double quad_oscillatory(const std::function<double(double)>& f, int harmonic);

struct Maximum {
  double argmax;
  double value;
  int evaluations;
};

/// Golden-section maximisation of a unimodal function on [lo, hi]. If an
/// endpoint beats both interior probes the bracket is widened (up to three
/// times, by its own width on that side) before giving up with
/// NumericalError.
Maximum maximize_1d(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Complete elliptic integral of the first kind from the complementary
/// modulus k' = sqrt(1 - k²), via the arithmetic–geometric mean. Accurate
/// for k' far below the double-precision resolution of k.
double elliptic_k_complement(double k_prime);

}  // namespace ionfield::numerics
