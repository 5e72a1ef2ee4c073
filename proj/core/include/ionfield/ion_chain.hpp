#pragma once

#include <optional>
#include <vector>

#include "ionfield/gaussian.hpp"
#include "ionfield/numerics.hpp"

namespace ionfield::ion_chain {

using numerics::Matrix;
using numerics::Vector;

inline constexpr int kMaxIons = 300;

/// Physical length and frequency scales of a homogeneous ion chain in a
/// quadratic axial trap. SI units throughout.
struct PhysicalScales {
  double charge;          // q [C]
  double mass;            // m [kg]
  double trap_strength;   // κ₂ [V/m²]
  double omega_z;         // centre-of-mass angular frequency [rad/s]
  double spacing_length;  // ℓ_μm [m], sets the inter-ion distance
  double zero_point_length;  // ℓ_nm [m], ground-state fluctuation size

  double length_ratio() const { return zero_point_length / spacing_length; }
};

/// Exactly one of `trap_strength` / `omega_z` must be given.
PhysicalScales compute_scales(double charge, double mass, std::optional<double> trap_strength,
                              std::optional<double> omega_z);

/// ¹⁷¹Yb⁺ (singly charged, 170.936 u).
PhysicalScales ytterbium171_scales(double axial_frequency_hz);

/// Dimensionless harmonic model of an N-ion chain. Rows of `modes` are the
/// normal-mode eigenvectors; row α pairs with frequencies(α).
struct IonChainModel {
  int ions = 0;
  Vector positions;    // units of ℓ_μm, ascending
  Matrix hessian;      // half the Hessian of the dimensionless potential
  Vector frequencies;  // units of ω_z, ascending; the first is always 1
  Matrix modes;
};

/// Dimensionless potential Σ z_i² + Σ_{i≠j} 1/|z_i − z_j|.
double potential(const Vector& positions);
Vector potential_gradient(const Vector& positions);

/// Damped Newton iteration to ‖∇U‖_∞ ≤ 1e-12 · max(1, 2 max|z|).
Vector solve_equilibrium(int ions);

Matrix build_hessian(const Vector& positions);

struct NormalModes {
  Vector frequencies;
  Matrix modes;
};
NormalModes normal_modes(const Matrix& hessian);

IonChainModel build_model(int ions);

/// Ground-state covariance matrix of the local axial modes in the
/// interleaved (φ₁, π₁, …) basis with vacuum = identity.
gaussian::CovarianceMatrix local_mode_cm(const IonChainModel& model);

}  // namespace ionfield::ion_chain
