#include "ionfield/ion_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "ionfield/error.hpp"

namespace ionfield::ion_chain {

namespace {

// CODATA 2018.
constexpr double kVacuumPermittivity = 8.8541878128e-12;
constexpr double kReducedPlanck = 1.054571817e-34;
constexpr double kElementaryCharge = 1.602176634e-19;
constexpr double kAtomicMassUnit = 1.66053906660e-27;
constexpr double kYtterbium171Mass = 170.9363258;

void require_ascending(const Vector& positions) {
  for (Eigen::Index i = 1; i < positions.size(); ++i) {
    if (!(positions(i) > positions(i - 1))) {
      std::ostringstream os;
      os << "ion positions must be strictly ascending (positions " << i - 1 << " and " << i << " are "
         << positions(i - 1) << ", " << positions(i) << ")";
      throw std::invalid_argument(os.str());
    }
  }
}

}  // namespace

PhysicalScales compute_scales(double charge, double mass, std::optional<double> trap_strength,
                              std::optional<double> omega_z) {
  if (trap_strength.has_value() == omega_z.has_value()) {
    throw std::invalid_argument("compute_scales: supply exactly one of trap strength and omega_z");
  }
  if (!(charge > 0.0) || !(mass > 0.0) || (trap_strength && !(*trap_strength > 0.0)) ||
      (omega_z && !(*omega_z > 0.0))) {
    throw std::invalid_argument("compute_scales: inputs must be strictly positive");
  }
  PhysicalScales s{};
  s.charge = charge;
  s.mass = mass;
  if (trap_strength) {
    s.trap_strength = *trap_strength;
    s.omega_z = std::sqrt(2.0 * charge * s.trap_strength / mass);
  } else {
    s.omega_z = *omega_z;
    s.trap_strength = mass * s.omega_z * s.omega_z / (2.0 * charge);
  }
  s.spacing_length = std::cbrt(charge / (8.0 * std::numbers::pi * kVacuumPermittivity * s.trap_strength));
  s.zero_point_length = std::sqrt(kReducedPlanck / (mass * s.omega_z));
  return s;
}

PhysicalScales ytterbium171_scales(double axial_frequency_hz) {
  return compute_scales(kElementaryCharge, kYtterbium171Mass * kAtomicMassUnit, std::nullopt,
                        2.0 * std::numbers::pi * axial_frequency_hz);
}

double potential(const Vector& z) {
  double u = z.squaredNorm();
  for (Eigen::Index i = 0; i < z.size(); ++i)
    for (Eigen::Index j = i + 1; j < z.size(); ++j) u += 2.0 / std::abs(z(i) - z(j));
  return u;
}

Vector potential_gradient(const Vector& z) {
  const Eigen::Index n = z.size();
  Vector g = 2.0 * z;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = z(i) - z(j);
      g(i) -= 2.0 * (d > 0.0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return g;
}

Matrix build_hessian(const Vector& z) {
  require_ascending(z);
  const Eigen::Index n = z.size();
  Matrix l = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double coupling = 2.0 / std::pow(std::abs(z(i) - z(j)), 3);
      l(i, j) = -coupling;
      l(i, i) += coupling;
    }
  }
  return l;
}

Vector solve_equilibrium(int ions) {
  if (ions < 1) throw std::invalid_argument("solve_equilibrium: need at least one ion");
  const Eigen::Index n = ions;
  Vector z(n);
  if (n == 1) {
    z(0) = 0.0;
    return z;
  }
  // Uniform-density start spanning roughly the true chain length.
  const double half_length = 0.5 * std::pow(static_cast<double>(n), 2.0 / 3.0);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = -half_length + 2.0 * half_length * i / static_cast<double>(n - 1);

  // Relative to the largest individual force 2|z|; absolute 1e-12 is below
  // roundoff once the chain is longer than a few dozen ions.
  constexpr double kRelativeTolerance = 1e-12;
  constexpr int kMaxIterations = 200;
  auto tolerance = [&] { return kRelativeTolerance * std::max(1.0, 2.0 * z.cwiseAbs().maxCoeff()); };
  double residual = potential_gradient(z).cwiseAbs().maxCoeff();
  for (int it = 0; it < kMaxIterations && residual > tolerance(); ++it) {
    const Vector g = potential_gradient(z);
    // ∇²U = 2 L̄; the potential is convex on the ordered sector, so L̄ is SPD.
    const Vector step = -(2.0 * build_hessian(z)).ldlt().solve(g);
    const double u0 = potential(z);
    double t = 1.0;
    Vector trial = z + step;
    auto ordered = [](const Vector& v) {
      for (Eigen::Index i = 1; i < v.size(); ++i)
        if (!(v(i) > v(i - 1))) return false;
      return true;
    };
    while ((!ordered(trial) || potential(trial) > u0 + 1e-14 * std::abs(u0)) && t > 1e-8) {
      t *= 0.5;
      trial = z + t * step;
    }
    if (!ordered(trial)) break;
    z = trial;
    residual = potential_gradient(z).cwiseAbs().maxCoeff();
  }
  if (!(residual <= tolerance())) {
    std::ostringstream os;
    os << "solve_equilibrium: Newton iteration stalled for N=" << ions << " (max |∇U| = " << residual << ")";
    throw NumericalError(os.str(), residual);
  }
  // Enforce the reflection symmetry exactly.
  const Vector mirrored = -z.reverse();
  return 0.5 * (z + mirrored);
}

NormalModes normal_modes(const Matrix& hessian) {
  const numerics::SymSpectrum spectrum = numerics::sym_eigen(hessian);
  const Eigen::Index n = spectrum.eigenvalues.size();
  NormalModes out{Vector(n), spectrum.eigenvectors.transpose()};
  for (Eigen::Index a = 0; a < n; ++a) {
    const double w2 = spectrum.eigenvalues(a);
    if (!(w2 > 0.0)) {
      std::ostringstream os;
      os << "normal_modes: non-positive eigenvalue " << w2 << " (unstable configuration)";
      throw std::invalid_argument(os.str());
    }
    out.frequencies(a) = std::sqrt(w2);
  }
  return out;
}

IonChainModel build_model(int ions) {
  if (ions < 1 || ions > kMaxIons) {
    std::ostringstream os;
    os << "build_model: ion count must lie in [1, " << kMaxIons << "], got " << ions;
    throw std::invalid_argument(os.str());
  }
  IonChainModel model;
  model.ions = ions;
  model.positions = solve_equilibrium(ions);
  model.hessian = build_hessian(model.positions);
  auto [frequencies, modes] = normal_modes(model.hessian);
  model.frequencies = std::move(frequencies);
  model.modes = std::move(modes);
  return model;
}

gaussian::CovarianceMatrix local_mode_cm(const IonChainModel& model) {
  const Eigen::Index n = model.ions;
  if (model.modes.rows() != n || model.frequencies.size() != n) {
    throw std::invalid_argument("local_mode_cm: inconsistent model dimensions");
  }
  const Matrix& e = model.modes;
  const Matrix phi = e.transpose() * model.frequencies.cwiseInverse().asDiagonal() * e;
  const Matrix pi = e.transpose() * model.frequencies.asDiagonal() * e;
  return gaussian::CovarianceMatrix::from_blocks(phi, pi);
}

}  // namespace ionfield::ion_chain
