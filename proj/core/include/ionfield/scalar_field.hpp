#pragma once

#include <span>
#include <vector>

#include "ionfield/gaussian.hpp"

namespace ionfield::scalar_field {

inline constexpr double kMasslessRegime = 1e-10;

/// Free scalar field on an infinite 1D lattice with nearest-neighbour
/// dispersion ω_k = √(m² + 4 sin²(k/2)), observed through `window`
/// contiguous sites.
struct ScalarFieldSpec {
  double mass = kMasslessRegime;
  int window = 1;

  void validate() const;
};

/// ∫_{-π}^{π} dk/2π cos(kΔ)/ω_k. The constant Δ = 0 part is the complete
/// elliptic integral (2/π) K(k)/√(m²+4), evaluated from its complementary
/// modulus so the log(1/m) growth survives at tiny mass; the remainder is
/// smooth and integrated numerically.
double phi_correlator(double mass, int separation);
/// ∫_{-π}^{π} dk/2π ω_k cos(kΔ).
double pi_correlator(double mass, int separation);

/// Vacuum covariance of `window` contiguous sites (Toeplitz in |i − j|).
gaussian::CovarianceMatrix scalar_vacuum_cm(const ScalarFieldSpec& spec);

/// Covariance of `sites` (indices into a window of spec.window sites) after
/// ideal homodyne detection of quadrature `q` on every other site of the
/// infinite lattice, including sites beyond the window. Exact: the
/// conditioned q-block equals the inverse of the restricted conjugate block,
/// because the two quadrature correlators are mutually inverse Toeplitz
/// operators on the full lattice.
gaussian::CovarianceMatrix condition_exterior(const ScalarFieldSpec& spec, std::span<const int> sites,
                                              gaussian::Quadrature q);

/// Finite-volume version of condition_exterior: measures every non-retained
/// site of the window plus `buffer` extra sites on each side. Converges in
/// the buffer for φ-detection; for π-detection it drifts logarithmically
/// until the buffer reaches the 1/m correlation length.
gaussian::CovarianceMatrix condition_with_buffer(const ScalarFieldSpec& spec, std::span<const int> sites,
                                                 gaussian::Quadrature q, int buffer);

}  // namespace ionfield::scalar_field
