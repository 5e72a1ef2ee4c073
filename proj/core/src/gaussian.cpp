#include "ionfield/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ionfield/error.hpp"

namespace ionfield::gaussian {

namespace {

void check_modes(std::span<const int> modes, int total, const char* who) {
  std::vector<bool> seen(static_cast<std::size_t>(std::max(total, 0)), false);
  for (int m : modes) {
    if (m < 0 || m >= total) {
      std::ostringstream os;
      os << who << ": mode index " << m << " out of range [0, " << total << ")";
      throw std::invalid_argument(os.str());
    }
    if (seen[static_cast<std::size_t>(m)]) {
      std::ostringstream os;
      os << who << ": mode index " << m << " repeated";
      throw std::invalid_argument(os.str());
    }
    seen[static_cast<std::size_t>(m)] = true;
  }
}

std::vector<Eigen::Index> phase_space_indices(std::span<const int> modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(modes.size() * 2);
  for (int m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return idx;
}

Matrix submatrix(const Matrix& m, const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

// √(I + X⁻²/4) as a function of X through its eigendecomposition. Used when
// the argument is (nearly) singular, which happens whenever both states are
// pure.
Matrix fidelity_root_via_eigen(const Matrix& x) {
  Eigen::EigenSolver<Matrix> solver(x);
  if (solver.info() != Eigen::Success) throw NumericalError("fidelity: eigendecomposition failed", 0.0);
  const Eigen::MatrixXcd p = solver.eigenvectors();
  Eigen::VectorXcd g = solver.eigenvalues();
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const std::complex<double> lambda = g(k);
    g(k) = std::sqrt(1.0 + 1.0 / (4.0 * lambda * lambda));
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(p);
  const Eigen::MatrixXcd root = p * g.asDiagonal() * lu.inverse();
  return root.real();
}

}  // namespace

// ---------------------------------------------------------------------------

CovarianceMatrix::CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0) {
    std::ostringstream os;
    os << "CovarianceMatrix: expected an even square matrix, got " << entries_.rows() << "x" << entries_.cols();
    throw std::invalid_argument(os.str());
  }
  const double scale = std::max(numerics::max_abs(entries_), 1e-300);
  const double skew = numerics::asymmetry(entries_);
  if (skew > 1e-12 * scale) {
    std::ostringstream os;
    os << "CovarianceMatrix: asymmetry " << skew << " exceeds tolerance";
    throw std::invalid_argument(os.str());
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  if (modes < 0) throw std::invalid_argument("CovarianceMatrix::vacuum: negative mode count");
  return CovarianceMatrix(Matrix::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix CovarianceMatrix::from_blocks(const Matrix& phi, const Matrix& pi) {
  if (phi.rows() != phi.cols() || pi.rows() != pi.cols() || phi.rows() != pi.rows()) {
    throw std::invalid_argument("CovarianceMatrix::from_blocks: blocks must be square and equal-sized");
  }
  const Eigen::Index n = phi.rows();
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s(2 * i, 2 * j) = phi(i, j);
      s(2 * i + 1, 2 * j + 1) = pi(i, j);
    }
  }
  return CovarianceMatrix(std::move(s));
}

Matrix CovarianceMatrix::quadrature_block(Quadrature q) const {
  const Eigen::Index n = modes();
  const Eigen::Index offset = q == Quadrature::phi ? 0 : 1;
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = entries_(2 * i + offset, 2 * j + offset);
  return out;
}

bool CovarianceMatrix::is_physical(double tol) const {
  if (modes() == 0) return true;
  if (entries_.llt().info() != Eigen::Success) return false;
  const Vector nu = symplectic_spectrum(entries_);
  return nu(0) >= 1.0 - tol;
}

Matrix symplectic_form(int modes) {
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

// ---------------------------------------------------------------------------

SymplecticTransform::SymplecticTransform(Matrix s) : s_(std::move(s)) {
  if (s_.rows() != s_.cols() || s_.rows() % 2 != 0) {
    throw std::invalid_argument("SymplecticTransform: expected an even square matrix");
  }
  const Matrix omega = symplectic_form(modes());
  const double defect = numerics::max_abs(s_ * omega * s_.transpose() - omega);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "SymplecticTransform: |S Ω Sᵀ − Ω| = " << defect << " exceeds 1e-10";
    throw std::invalid_argument(os.str());
  }
}

SymplecticTransform SymplecticTransform::identity(int modes) {
  return SymplecticTransform(Matrix::Identity(2 * modes, 2 * modes));
}

SymplecticTransform SymplecticTransform::operator*(const SymplecticTransform& rhs) const {
  if (rhs.modes() != modes()) throw std::invalid_argument("SymplecticTransform: mode count mismatch");
  return SymplecticTransform(s_ * rhs.s_);
}

SymplecticTransform SymplecticTransform::direct_sum(const SymplecticTransform& other) const {
  const Eigen::Index a = s_.rows();
  const Eigen::Index b = other.s_.rows();
  Matrix out = Matrix::Zero(a + b, a + b);
  out.topLeftCorner(a, a) = s_;
  out.bottomRightCorner(b, b) = other.s_;
  return SymplecticTransform(std::move(out));
}

SymplecticTransform single_mode_squeeze(int modes, double z, std::span<const int> targets) {
  if (!(z > 0.0)) throw std::invalid_argument("single_mode_squeeze: z must be positive");
  check_modes(targets, modes, "single_mode_squeeze");
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  for (int t : targets) {
    s(2 * t, 2 * t) = z;
    s(2 * t + 1, 2 * t + 1) = 1.0 / z;
  }
  return SymplecticTransform(std::move(s));
}

SymplecticTransform global_squeeze(int modes, double z) {
  std::vector<int> all(static_cast<std::size_t>(modes));
  std::iota(all.begin(), all.end(), 0);
  return single_mode_squeeze(modes, z, all);
}

SymplecticTransform single_mode_rotation(int modes, double angle, std::span<const int> targets) {
  check_modes(targets, modes, "single_mode_rotation");
  Matrix s = Matrix::Identity(2 * modes, 2 * modes);
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  for (int t : targets) {
    s(2 * t, 2 * t) = c;
    s(2 * t, 2 * t + 1) = sn;
    s(2 * t + 1, 2 * t) = -sn;
    s(2 * t + 1, 2 * t + 1) = c;
  }
  return SymplecticTransform(std::move(s));
}

SymplecticTransform two_mode_squeeze(double r) {
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Matrix m(4, 4);
  m << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return SymplecticTransform(std::move(m));
}

// ---------------------------------------------------------------------------

void RegionSpec::validate() const {
  if (size < 1 || separation < 0 || 2 * size + separation > total) {
    std::ostringstream os;
    os << "RegionSpec: infeasible geometry (total " << total << ", size " << size << ", separation " << separation
       << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<int> RegionSpec::region_a() const {
  validate();
  std::vector<int> out(static_cast<std::size_t>(size));
  std::iota(out.begin(), out.end(), left_margin());
  return out;
}

std::vector<int> RegionSpec::region_b() const {
  validate();
  std::vector<int> out(static_cast<std::size_t>(size));
  std::iota(out.begin(), out.end(), left_margin() + size + separation);
  return out;
}

std::vector<int> RegionSpec::both() const {
  std::vector<int> out = region_a();
  const std::vector<int> b = region_b();
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> RegionSpec::exterior() const {
  const std::vector<int> inside = both();
  std::vector<int> out;
  for (int m = 0; m < total; ++m) {
    if (std::find(inside.begin(), inside.end(), m) == inside.end()) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

CovarianceMatrix restrict(const CovarianceMatrix& sigma, std::span<const int> modes) {
  check_modes(modes, sigma.modes(), "restrict");
  const auto idx = phase_space_indices(modes);
  return CovarianceMatrix(submatrix(sigma.matrix(), idx, idx));
}

CovarianceMatrix condition_homodyne(const CovarianceMatrix& sigma, std::span<const int> measured, Quadrature q) {
  check_modes(measured, sigma.modes(), "condition_homodyne");
  std::vector<bool> is_measured(static_cast<std::size_t>(sigma.modes()), false);
  for (int m : measured) is_measured[static_cast<std::size_t>(m)] = true;
  std::vector<int> kept;
  for (int m = 0; m < sigma.modes(); ++m)
    if (!is_measured[static_cast<std::size_t>(m)]) kept.push_back(m);

  const auto keep_idx = phase_space_indices(kept);
  if (measured.empty()) return CovarianceMatrix(submatrix(sigma.matrix(), keep_idx, keep_idx));

  const Eigen::Index offset = q == Quadrature::phi ? 0 : 1;
  std::vector<Eigen::Index> meas_idx;
  meas_idx.reserve(measured.size());
  for (int m : measured) meas_idx.push_back(2 * m + offset);

  const Matrix a = submatrix(sigma.matrix(), keep_idx, keep_idx);
  const Matrix c = submatrix(sigma.matrix(), keep_idx, meas_idx);
  const Matrix e = submatrix(sigma.matrix(), meas_idx, meas_idx);

  Eigen::LDLT<Matrix> ldlt(e);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-14 * ldlt.vectorD().cwiseAbs().maxCoeff()) {
    throw NumericalError("condition_homodyne: measured-quadrature block is singular", 0.0);
  }
  return CovarianceMatrix(a - c * ldlt.solve(c.transpose()));
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix& sigma, const SymplecticTransform& s) {
  if (s.modes() != sigma.modes()) throw std::invalid_argument("apply_symplectic: mode count mismatch");
  return CovarianceMatrix(s.matrix() * sigma.matrix() * s.matrix().transpose());
}

Vector symplectic_spectrum(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0) {
    throw std::invalid_argument("symplectic_spectrum: expected an even square matrix");
  }
  const int n = static_cast<int>(sigma.rows() / 2);
  if (n == 0) return Vector();
  const numerics::SymSpectrum spec = numerics::sym_eigen(sigma);
  if (!(spec.eigenvalues(0) > 0.0)) {
    std::ostringstream os;
    os << "symplectic_spectrum: matrix is not positive definite (min eigenvalue " << spec.eigenvalues(0) << ")";
    throw std::invalid_argument(os.str());
  }
  const Matrix root = numerics::sym_function(spec, [](double x) { return std::sqrt(x); });
  const Matrix omega = symplectic_form(n);
  Matrix m = root * omega.transpose() * sigma * omega * root;
  m = 0.5 * (m + m.transpose()).eval();
  const Vector squares = numerics::sym_eigen(m).eigenvalues;
  // Eigenvalues of M come in degenerate pairs ν_k².
  Vector nu(n);
  for (int k = 0; k < n; ++k) nu(k) = std::sqrt(0.5 * (squares(2 * k) + squares(2 * k + 1)));
  return nu;
}

Matrix partial_transpose(const CovarianceMatrix& sigma, std::span<const int> region_b) {
  check_modes(region_b, sigma.modes(), "partial_transpose");
  Matrix out = sigma.matrix();
  for (int b : region_b) {
    out.row(2 * b + 1) *= -1.0;
    out.col(2 * b + 1) *= -1.0;
  }
  return out;
}

Vector pt_symplectic_spectrum(const CovarianceMatrix& sigma, std::span<const int> region_b) {
  return symplectic_spectrum(partial_transpose(sigma, region_b));
}

namespace {

void check_bipartition(const CovarianceMatrix& sigma, std::span<const int> a, std::span<const int> b) {
  check_modes(a, sigma.modes(), "log_negativity");
  check_modes(b, sigma.modes(), "log_negativity");
  for (int x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      std::ostringstream os;
      os << "log_negativity: regions overlap at mode " << x;
      throw std::invalid_argument(os.str());
    }
  }
  if (static_cast<int>(a.size() + b.size()) != sigma.modes()) {
    throw std::invalid_argument("log_negativity: regions must cover every mode of the state");
  }
}

}  // namespace

double log_negativity(const CovarianceMatrix& sigma, std::span<const int> a, std::span<const int> b) {
  check_bipartition(sigma, a, b);
  const Vector nu = pt_symplectic_spectrum(sigma, b);
  double total = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (nu(k) < 1.0 - kUnitSymplecticTolerance) total -= std::log2(nu(k));
  }
  return total;
}

bool is_ppt(const CovarianceMatrix& sigma, std::span<const int> region_b) {
  const Vector nu = pt_symplectic_spectrum(sigma, region_b);
  return nu.size() == 0 || nu(0) >= 1.0 - kUnitSymplecticTolerance;
}

double entanglement_entropy(const CovarianceMatrix& sigma) {
  const Vector nu = symplectic_spectrum(sigma);
  double s = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    const double v = nu(k);
    if (v < 1.0 - kUnitSymplecticTolerance) {
      std::ostringstream os;
      os << "entanglement_entropy: symplectic eigenvalue " << v << " < 1 (unphysical state)";
      throw std::invalid_argument(os.str());
    }
    if (v <= 1.0 + kUnitSymplecticTolerance) continue;
    const double plus = 0.5 * (v + 1.0);
    const double minus = 0.5 * (v - 1.0);
    s += plus * std::log2(plus) - minus * std::log2(minus);
  }
  return s;
}

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace

double fidelity_via_matrix_root(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("fidelity: mode count mismatch");
  const int n = a.modes();
  if (n == 0) return 1.0;

  // The closed form is stated for covariances normalised so that the vacuum
  // is I/2.
  const Matrix s1 = 0.5 * a.matrix();
  const Matrix s2 = 0.5 * b.matrix();
  const Matrix omega = symplectic_form(n);
  const Matrix id = Matrix::Identity(2 * n, 2 * n);
  const Matrix sum = s1 + s2;

  Eigen::PartialPivLU<Matrix> sum_lu(sum);
  const Matrix v = omega.transpose() * sum_lu.solve(0.25 * omega + s2 * omega * s1);
  const Matrix x = v * omega;
  const Matrix x_inv = numerics::inverse(x);
  const Matrix arg = id + 0.25 * x_inv * x_inv;

  Matrix root;
  try {
    root = numerics::principal_sqrt(arg);
  } catch (const NumericalError&) {
    root = fidelity_root_via_eigen(x);
  }

  const auto [log_num, sign_num] = numerics::log_abs_determinant(2.0 * (root + id) * v);
  const auto [log_den, sign_den] = numerics::log_abs_determinant(sum);
  if (sign_den <= 0) throw NumericalError("fidelity: σ₁ + σ₂ is singular or indefinite", 0.0);
  if (sign_num == 0) return 0.0;
  const double f = std::exp(0.25 * (log_num - log_den));
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("fidelity: mode count mismatch");
  const int n = a.modes();
  if (n == 0) return 1.0;
  const Eigen::Index dim = 2 * n;

  // Same determinant as fidelity_via_matrix_root, taken over the spectrum of
  // X = VΩ. V is antisymmetric, so X has eigenvalues ±i x_k with x_k ≥ ½ and
  //   det[2(√(I + X⁻²/4) + I) V] = Π_k (2x_k + √(4x_k² − 1))².
  // Near-pure modes put x_k next to ½ where the square root amplifies
  // rounding, hence the extended precision.
  const LongMatrix s1 = a.matrix().cast<long double>() / 2.0L;
  const LongMatrix s2 = b.matrix().cast<long double>() / 2.0L;
  const LongMatrix omega = symplectic_form(n).cast<long double>();
  const LongMatrix sum = s1 + s2;
  Eigen::PartialPivLU<LongMatrix> sum_lu(sum);
  const long double det_sum = sum_lu.determinant();
  if (!(det_sum > 0.0L)) throw NumericalError("fidelity: σ₁ + σ₂ is singular or indefinite", static_cast<double>(det_sum));

  const LongMatrix v = omega.transpose() * sum_lu.solve(0.25L * omega + s2 * omega * s1);
  Eigen::EigenSolver<LongMatrix> solver(v * omega, false);
  if (solver.info() != Eigen::Success) throw NumericalError("fidelity: eigenvalues of VΩ did not converge", 0.0);

  // 4x² − 1 below kPureModeGap is rounding on an exactly pure pair (one
  // state pure makes every x_k = ½); left in, its square root would turn
  // 1e-19 noise into 1e-10 errors.
  constexpr long double kPureModeGap = 1e-14L;
  long double log_num = 0.0L;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const long double x = std::abs(solver.eigenvalues()(k));
    const long double gap = 4.0L * x * x - 1.0L;
    log_num += std::log(2.0L * x + (gap > kPureModeGap ? std::sqrt(gap) : 0.0L));
  }
  // Each x_k appears twice in the spectrum; the determinant has it squared.
  const long double f = std::exp(0.25L * (log_num - std::log(det_sum)));
  return std::clamp(static_cast<double>(f), 0.0, 1.0);
}

SqueezeOptimum optimize_global_squeeze(const CovarianceMatrix& source, const CovarianceMatrix& target,
                                       double log_tol) {
  if (source.modes() != target.modes()) throw std::invalid_argument("optimize_global_squeeze: mode count mismatch");
  const int n = source.modes();
  auto objective = [&](double log_z) {
    return fidelity(apply_symplectic(source, global_squeeze(n, std::exp(log_z))), target);
  };
  const numerics::Maximum best =
      numerics::maximize_1d(objective, std::log(kSqueezeBracketLow), std::log(kSqueezeBracketHigh), log_tol);
  return {std::exp(best.argmax), best.value};
}

}  // namespace ionfield::gaussian
