#pragma once

#include <span>
#include <vector>

#include "ionfield/numerics.hpp"

namespace ionfield::gaussian {

using numerics::Matrix;
using numerics::Vector;

enum class Quadrature { phi, pi };

/// Second moments {r_i, r_j}₊ of a zero-mean Gaussian state of n modes in the
/// interleaved basis (φ₁, π₁, …, φₙ, πₙ). The vacuum is the identity.
///
/// Construction only checks shape and symmetry (to 1e-12 relative) and
/// symmetrises exactly; physicality is a separate query because intermediate
/// matrices such as partial transposes share the representation.
class CovarianceMatrix {
public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(Matrix entries);

  static CovarianceMatrix vacuum(int modes);
  /// Block-diagonal in quadratures: φφ correlations from `phi`, ππ from `pi`,
  /// vanishing φπ cross terms.
  static CovarianceMatrix from_blocks(const Matrix& phi, const Matrix& pi);

  int modes() const noexcept { return static_cast<int>(entries_.rows() / 2); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  /// n×n block of one quadrature, e.g. phi_block()(i, j) = σ(2i, 2j).
  Matrix quadrature_block(Quadrature q) const;

  /// Minimum symplectic eigenvalue ≥ 1 − tol with σ positive definite,
  /// equivalent to σ + iΩ ⪰ 0.
  bool is_physical(double tol = 1e-9) const;

private:
  Matrix entries_;
};

/// ⊕ⁿ [[0, 1], [−1, 0]].
Matrix symplectic_form(int modes);

/// Real 2n×2n matrix with S Ω Sᵀ = Ω to 1e-10.
class SymplecticTransform {
public:
  explicit SymplecticTransform(Matrix s);

  static SymplecticTransform identity(int modes);

  int modes() const noexcept { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const noexcept { return s_; }

  SymplecticTransform operator*(const SymplecticTransform& rhs) const;
  /// Block-diagonal combination acting on the modes of *this then `other`.
  SymplecticTransform direct_sum(const SymplecticTransform& other) const;

private:
  Matrix s_;
};

/// diag(z, 1/z) on each target mode.
SymplecticTransform single_mode_squeeze(int modes, double z, std::span<const int> targets);
/// Same squeeze on every mode.
SymplecticTransform global_squeeze(int modes, double z);
/// [[cos φ, sin φ], [−sin φ, cos φ]] on each target mode.
SymplecticTransform single_mode_rotation(int modes, double angle, std::span<const int> targets);
/// Two-mode squeezer exp(r(a₁†a₂† − a₁a₂)) on modes (0, 1).
SymplecticTransform two_mode_squeeze(double r);

/// Two disjoint blocks of `size` contiguous modes separated by `separation`
/// modes, placed inside `total` modes with the leftover split as evenly as
/// possible (the extra mode, if any, goes to the right).
struct RegionSpec {
  int total = 0;
  int size = 0;
  int separation = 0;

  void validate() const;
  int left_margin() const { return (total - 2 * size - separation) / 2; }
  std::vector<int> region_a() const;
  std::vector<int> region_b() const;
  /// region_a() followed by region_b().
  std::vector<int> both() const;
  /// Every mode outside both regions, ascending.
  std::vector<int> exterior() const;
};

/// Marginal on `modes` (in the given order).
CovarianceMatrix restrict(const CovarianceMatrix& sigma, std::span<const int> modes);

/// Conditional covariance of the unmeasured modes after ideal homodyne
/// detection of quadrature `q` on `measured`:
///   σ'_A = σ_A − σ_{A,E_q} (σ_{E_q,E_q})⁻¹ σ_{E_q,A}.
/// Independent of the measurement record. Retained modes keep their order.
CovarianceMatrix condition_homodyne(const CovarianceMatrix& sigma, std::span<const int> measured, Quadrature q);

CovarianceMatrix apply_symplectic(const CovarianceMatrix& sigma, const SymplecticTransform& s);

/// Williamson spectrum, ascending. Works on any symmetric positive-definite
/// 2n×2n matrix, including partial transposes.
Vector symplectic_spectrum(const Matrix& sigma);
inline Vector symplectic_spectrum(const CovarianceMatrix& sigma) { return symplectic_spectrum(sigma.matrix()); }

/// P σ P with P flipping the sign of the momenta of `region_b`.
Matrix partial_transpose(const CovarianceMatrix& sigma, std::span<const int> region_b);

/// Symplectic eigenvalues within this distance of 1 are treated as 1.
inline constexpr double kUnitSymplecticTolerance = 1e-9;

Vector pt_symplectic_spectrum(const CovarianceMatrix& sigma, std::span<const int> region_b);

/// Σ_k max(0, −log₂ ν̃_k) over the partially transposed spectrum. `a` and
/// `b` must be disjoint and together cover every mode of `sigma`.
double log_negativity(const CovarianceMatrix& sigma, std::span<const int> a, std::span<const int> b);

/// True when every partially transposed symplectic eigenvalue is at least
/// 1 − kUnitSymplecticTolerance.
bool is_ppt(const CovarianceMatrix& sigma, std::span<const int> region_b);

/// von Neumann entropy in bits of a (reduced) state.
double entanglement_entropy(const CovarianceMatrix& sigma);

/// Uhlmann fidelity tr√(√ρ₁ ρ₂ √ρ₁) of two zero-mean Gaussian states,
/// evaluated from the spectrum of VΩ in extended precision.
double fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// The same closed form with the matrix square root taken literally
/// (principal_sqrt, eigen route when the argument is singular). Accurate to
/// about 1e-7 near pure states; kept as a cross-check.
double fidelity_via_matrix_root(const CovarianceMatrix& a, const CovarianceMatrix& b);

struct SqueezeOptimum {
  double z;
  double fidelity;
};

inline constexpr double kSqueezeBracketLow = 0.5;
inline constexpr double kSqueezeBracketHigh = 20.0;

/// Maximises fidelity(S_z σ_source S_zᵀ, σ_target) over a squeeze z applied
/// identically to every mode. Golden-section search in ln z on
/// [0.5, 20]; `log_tol` is the final bracket width in ln z.
SqueezeOptimum optimize_global_squeeze(const CovarianceMatrix& source, const CovarianceMatrix& target,
                                       double log_tol = 1e-7);

}  // namespace ionfield::gaussian
