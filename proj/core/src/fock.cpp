#include "ionfield/fock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "ionfield/error.hpp"

namespace ionfield::fock {

using gaussian::CovarianceMatrix;

int FockIndex::total() const {
  int t = 0;
  for (int k : occupations) t += k;
  return t;
}

void FockIndex::validate(int modes, int cap) const {
  if (static_cast<int>(occupations.size()) != modes) {
    std::ostringstream os;
    os << "FockIndex: expected " << modes << " occupations, got " << occupations.size();
    throw std::invalid_argument(os.str());
  }
  for (int k : occupations) {
    if (k < 0 || k > cap) {
      std::ostringstream os;
      os << "FockIndex: occupation " << k << " outside [0, " << cap << "]";
      throw std::invalid_argument(os.str());
    }
  }
}

HusimiData husimi_data(const CovarianceMatrix& sigma) {
  const int n = sigma.modes();
  const Eigen::Index dim = 2 * n;
  Eigen::MatrixXcd xxpp(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index si = i < n ? 2 * i : 2 * (i - n) + 1;
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Eigen::Index sj = j < n ? 2 * j : 2 * (j - n) + 1;
      xxpp(i, j) = sigma(si, sj);
    }
  }
  const std::complex<double> i_unit(0.0, 1.0);
  const Eigen::MatrixXcd id_n = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd u(dim, dim);
  // unnormalised; the 1/√2 factors are applied as an exact ½ below
  u << id_n, i_unit * id_n, id_n, -i_unit * id_n;

  HusimiData h;
  h.modes = n;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  h.sigma_q = 0.5 * (0.5 * (u * xxpp * u.adjoint()) + id);
  h.sigma_q = (0.5 * (h.sigma_q + h.sigma_q.adjoint())).eval();

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h.sigma_q);
  const std::complex<double> det = dim == 0 ? std::complex<double>(1.0, 0.0) : lu.determinant();
  if (!(det.real() > 0.0) || std::abs(det.imag()) > 1e-10 * std::abs(det.real())) {
    std::ostringstream os;
    os << "husimi_data: σ_Q is singular or not positive (det = " << det << ")";
    throw NumericalError(os.str(), std::abs(det));
  }
  h.det_sigma_q = det.real();

  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(dim, dim);
  x.topRightCorner(n, n) = id_n;
  x.bottomLeftCorner(n, n) = id_n;
  h.a = x * (id - lu.inverse());
  return h;
}

FockEvaluator::FockEvaluator(HusimiData data, int occupation_cap)
    : data_(std::move(data)), cap_(occupation_cap), hafnian_(data_.a) {
  if (cap_ < 0) throw std::invalid_argument("FockEvaluator: negative occupation cap");
  log_factorials_.resize(static_cast<std::size_t>(cap_) + 1, 0.0);
  for (int k = 1; k <= cap_; ++k) log_factorials_[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
}

FockEvaluator::FockEvaluator(const CovarianceMatrix& sigma, int occupation_cap)
    : FockEvaluator(husimi_data(sigma), occupation_cap) {}

std::complex<double> FockEvaluator::element(const FockIndex& m, const FockIndex& n) {
  m.validate(data_.modes, cap_);
  n.validate(data_.modes, cap_);
  if ((m.total() + n.total()) % 2 == 1) return {0.0, 0.0};

  std::vector<int> multiplicities;
  multiplicities.reserve(2 * static_cast<std::size_t>(data_.modes));
  multiplicities.insert(multiplicities.end(), n.occupations.begin(), n.occupations.end());
  multiplicities.insert(multiplicities.end(), m.occupations.begin(), m.occupations.end());

  double log_norm = std::log(data_.det_sigma_q);
  for (int k : multiplicities) log_norm += log_factorials_[static_cast<std::size_t>(k)];
  return hafnian_(multiplicities) * std::exp(-0.5 * log_norm);
}

double matrix_element(const HusimiData& h, const FockIndex& m, const FockIndex& n, int occupation_cap) {
  FockEvaluator evaluator(h, occupation_cap);
  return evaluator.real_element(m, n);
}

Disentangled tmsv_disentangle(double v0, double v_plus, double v_minus) {
  const double f2 = 0.25 * v0 * v0 - v_plus * v_minus;
  // cosh f and sinh(f)/f as functions of f², valid for either sign of f².
  double c = 0.0;
  double s = 0.0;
  if (std::abs(f2) < 1e-8) {
    c = 1.0 + f2 / 2.0 + f2 * f2 / 24.0;
    s = 1.0 + f2 / 6.0 + f2 * f2 / 120.0;
  } else if (f2 > 0.0) {
    const double f = std::sqrt(f2);
    c = std::cosh(f);
    s = std::sinh(f) / f;
  } else {
    const double g = std::sqrt(-f2);
    c = std::cos(g);
    s = std::sin(g) / g;
  }
  const double denom = c - 0.5 * v0 * s;
  if (std::abs(denom) < 1e-300 || !std::isfinite(denom)) {
    throw NumericalError("tmsv_disentangle: vanishing denominator", denom);
  }
  return {1.0 / (denom * denom), v_plus * s / std::abs(denom), v_minus * s / std::abs(denom)};
}

double tmsv_diagonal(double r, int n) {
  if (n < 0) throw std::invalid_argument("tmsv_diagonal: negative occupation");
  const double c = std::cosh(r);
  return std::pow(std::tanh(r), 2 * n) / (c * c);
}

double normal_form_squeeze(const CovarianceMatrix& sigma, int mode) {
  if (mode < 0 || mode >= sigma.modes()) throw std::invalid_argument("normal_form_squeeze: mode out of range");
  return std::pow(sigma(2 * mode + 1, 2 * mode + 1) / sigma(2 * mode, 2 * mode), 0.25);
}

namespace {

constexpr int kMaxTailShell = 64;
constexpr double kTailRelativeTolerance = 1e-13;

void require_two_mode(const CovarianceMatrix& sigma, int qudit_dim) {
  if (sigma.modes() != 2) throw std::invalid_argument("qudit subspace: state must have exactly two modes");
  if (qudit_dim < 1 || qudit_dim > kMaxQuditDimension) {
    std::ostringstream os;
    os << "qudit subspace: dimension " << qudit_dim << " outside [1, " << kMaxQuditDimension << "]";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

double qudit_subspace_deficit(const CovarianceMatrix& sigma, int qudit_dim) {
  require_two_mode(sigma, qudit_dim);
  FockEvaluator evaluator(sigma, kMaxTailShell);
  double total = 0.0;
  int quiet_shells = 0;
  for (int shell = qudit_dim; shell <= kMaxTailShell; ++shell) {
    double shell_sum = 0.0;
    for (int a = 0; a <= shell; ++a) {
      const int b = shell - a;
      if (a < qudit_dim && b < qudit_dim) continue;
      shell_sum += evaluator.diagonal(FockIndex{{a, b}});
    }
    total += shell_sum;
    if (std::abs(shell_sum) <= kTailRelativeTolerance * std::abs(total)) {
      if (++quiet_shells == 2) return total;
    } else {
      quiet_shells = 0;
    }
  }
  std::ostringstream os;
  os << "qudit_subspace_deficit: Fock tail not converged by occupation " << kMaxTailShell;
  throw NumericalError(os.str(), total);
}

double qudit_subspace_probability(const CovarianceMatrix& sigma, int qudit_dim) {
  require_two_mode(sigma, qudit_dim);
  FockEvaluator evaluator(sigma, qudit_dim);
  long double total = 0.0L;
  for (int a = 0; a < qudit_dim; ++a)
    for (int b = 0; b < qudit_dim; ++b) total += evaluator.diagonal(FockIndex{{a, b}});
  return static_cast<double>(total);
}

std::vector<SweepPoint> subspace_sweep(const CovarianceMatrix& sigma, std::span<const double> z_grid,
                                       std::span<const double> angle_grid, int qudit_dim) {
  require_two_mode(sigma, qudit_dim);
  const std::vector<int> both{0, 1};
  std::vector<SweepPoint> out;
  out.reserve(z_grid.size() * angle_grid.size());
  for (double z : z_grid) {
    for (double angle : angle_grid) {
      if (!std::isfinite(z) || !std::isfinite(angle)) throw std::invalid_argument("subspace_sweep: non-finite grid");
      // rotate, then squeeze; a rotation applied last is passive and would not
      // move any Fock weight
      const auto s = gaussian::single_mode_squeeze(2, z, both) * gaussian::single_mode_rotation(2, angle, both);
      out.push_back({z, angle, qudit_subspace_deficit(gaussian::apply_symplectic(sigma, s), qudit_dim)});
    }
  }
  return out;
}

}  // namespace ionfield::fock
