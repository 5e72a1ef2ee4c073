#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ionfield/gaussian.hpp"
#include "ionfield/numerics.hpp"

namespace ionfield::fock {

inline constexpr int kDefaultOccupationCap = 12;
inline constexpr int kMaxQuditDimension = 8;

/// Occupation numbers, one per mode.
struct FockIndex {
  std::vector<int> occupations;

  int total() const;
  void validate(int modes, int cap) const;
};

/// Complex-quadrature data of a zero-mean Gaussian state:
///   σ_Q = ½(U σ_xxpp U† + I),  A = X (I − σ_Q⁻¹),
/// with σ_xxpp the covariance reordered to (φ…, π…) and U mapping
/// quadratures onto (a, a†).
struct HusimiData {
  int modes = 0;
  Eigen::MatrixXcd sigma_q;
  Eigen::MatrixXcd a;
  double det_sigma_q = 1.0;
};

HusimiData husimi_data(const gaussian::CovarianceMatrix& sigma);

/// Density-matrix elements ⟨m|ρ|n⟩ sharing one hafnian cache, so sweeps over
/// many elements of the same state reuse partial results.
class FockEvaluator {
public:
  explicit FockEvaluator(HusimiData data, int occupation_cap = kDefaultOccupationCap);
  explicit FockEvaluator(const gaussian::CovarianceMatrix& sigma, int occupation_cap = kDefaultOccupationCap);

  std::complex<double> element(const FockIndex& m, const FockIndex& n);
  double real_element(const FockIndex& m, const FockIndex& n) { return element(m, n).real(); }
  double diagonal(const FockIndex& n) { return element(n, n).real(); }

  const HusimiData& data() const noexcept { return data_; }
  int occupation_cap() const noexcept { return cap_; }

private:
  HusimiData data_;
  int cap_;
  numerics::RepeatedHafnian hafnian_;
  std::vector<double> log_factorials_;
};

/// ⟨m|ρ|n⟩ = haf(Ã) / √(det σ_Q Π m_j! n_j!), Ã built from A by repeating
/// row/column j n_j times in the first block and m_j times in the second.
double matrix_element(const HusimiData& h, const FockIndex& m, const FockIndex& n,
                      int occupation_cap = kDefaultOccupationCap);

/// Coefficients of exp(v₊K₊ + v₋K₋ + v₀K₀) = exp(t₊K₊) t₀^{K₀} exp(t₋K₋)
/// for su(1,1).
struct Disentangled {
  double t0;
  double t_plus;
  double t_minus;
};
Disentangled tmsv_disentangle(double v0, double v_plus, double v_minus);

/// ⟨n,n|ψ_r⟩² = tanh^{2n} r / cosh² r for the two-mode squeezed vacuum.
double tmsv_diagonal(double r, int n);

/// Single-mode squeeze (σ_ππ/σ_φφ)^{1/4} that balances the diagonal of mode
/// `mode`.
double normal_form_squeeze(const gaussian::CovarianceMatrix& sigma, int mode = 0);

/// Probability that a two-mode state lies outside span{|m₁ m₂⟩ : m₁, m₂ < D}.
/// Summed directly over the excluded states shell by shell in total
/// occupation until the shells stop contributing, which avoids the
/// cancellation in 1 − P_in when the deficit is tiny.
double qudit_subspace_deficit(const gaussian::CovarianceMatrix& sigma, int qudit_dim);

/// Σ_{m₁, m₂ < D} ⟨m₁ m₂|ρ|m₁ m₂⟩.
double qudit_subspace_probability(const gaussian::CovarianceMatrix& sigma, int qudit_dim);

struct SweepPoint {
  double z;
  double angle;
  double p_out;
};

/// P_out after rotating both modes by φ₁ and then squeezing both by z, for
/// every (z, φ₁) pair; row-major in z. The minima lie along φ₁ = 0 with
/// z = (σ_ππ/σ_φφ)^{1/4} and along φ₁ = π/2 with the reciprocal squeeze.
std::vector<SweepPoint> subspace_sweep(const gaussian::CovarianceMatrix& sigma, std::span<const double> z_grid,
                                       std::span<const double> angle_grid, int qudit_dim);

}  // namespace ionfield::fock
