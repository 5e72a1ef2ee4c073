#include "ionfield/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ionfield/error.hpp"

namespace ionfield::numerics {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("asymmetry: matrix is not square");
  return max_abs(m - m.transpose());
}

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << who << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
}

// Sorts eigenpairs ascending and fixes each eigenvector's sign so that its
// first largest-magnitude component is positive.
SymSpectrum canonicalize(Vector values, Matrix vectors) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  SymSpectrum out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = values(src);
    Vector v = vectors.col(src);
    const double biggest = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) >= biggest * (1.0 - 1e-9)) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    out.eigenvectors.col(k) = v;
  }
  return out;
}

}  // namespace

SymSpectrum sym_eigen(const Matrix& m) {
  require_square(m, "sym_eigen");
  const Eigen::Index n = m.rows();
  const double scale = max_abs(m);
  const double skew = asymmetry(m);
  if (skew > 1e-12 * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "sym_eigen: matrix is not symmetric (max |M - Mᵀ| = " << skew << ")";
    throw std::invalid_argument(os.str());
  }
  if (n == 0) return {};

  Matrix a = 0.5 * (m + m.transpose());
  Matrix v = Matrix::Identity(n, n);

  // Cyclic Jacobi with the Rutishauser rotation formulas.
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0 || std::sqrt(off) <= 1e-17 * a.diagonal().cwiseAbs().maxCoeff()) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  return canonicalize(a.diagonal(), v);
}

Matrix sym_function(const SymSpectrum& spectrum, const std::function<double(double)>& f) {
  const Eigen::Index n = spectrum.eigenvalues.size();
  Vector fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv(i) = f(spectrum.eigenvalues(i));
  return spectrum.eigenvectors * fv.asDiagonal() * spectrum.eigenvectors.transpose();
}

Matrix inverse(const Matrix& m) {
  require_square(m, "inverse");
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw NumericalError("inverse: matrix is singular", 0.0);
  return lu.inverse();
}

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  return m.rows() == 0 ? 1.0 : m.partialPivLu().determinant();
}

std::pair<double, int> log_abs_determinant(const Matrix& m) {
  require_square(m, "log_abs_determinant");
  if (m.rows() == 0) return {0.0, 1};
  Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix& packed = lu.matrixLU();
  double log_sum = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double d = packed(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (d < 0.0) sign = -sign;
    log_sum += std::log(std::abs(d));
  }
  return {log_sum, sign};
}

Matrix denman_beavers_sqrt(const Matrix& m, double tol, int max_iterations) {
  require_square(m, "principal_sqrt");
  const Eigen::Index n = m.rows();
  if (n == 0) return m;
  const double norm = std::max(max_abs(m), 1e-300);

  Matrix y = m;
  Matrix z = Matrix::Identity(n, n);
  bool scaling = true;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::PartialPivLU<Matrix> lu_y(y);
    Eigen::PartialPivLU<Matrix> lu_z(z);
    double mu = 1.0;
    if (scaling) {
      const auto [ly, sy] = log_abs_determinant(y);
      const auto [lz, sz] = log_abs_determinant(z);
      if (sy != 0 && sz != 0) mu = std::exp(-(ly + lz) / (2.0 * static_cast<double>(n)));
    }
    const Matrix y_next = 0.5 * (mu * y + lu_z.inverse() / mu);
    const Matrix z_next = 0.5 * (mu * z + lu_y.inverse() / mu);
    if (!y_next.allFinite() || !z_next.allFinite()) break;

    const double change = max_abs(y_next - y) / std::max(max_abs(y_next), 1e-300);
    y = y_next;
    z = z_next;
    if (change < 1e-2) scaling = false;
    if (change <= tol) break;
  }
  const double residual = max_abs(y * y - m) / norm;
  if (!std::isfinite(residual) || residual > 1e-10) {
    std::ostringstream os;
    os << "principal_sqrt: Denman-Beavers did not converge (relative residual " << residual << ")";
    throw NumericalError(os.str(), residual);
  }
  return y;
}

Matrix principal_sqrt(const Matrix& m) {
  require_square(m, "principal_sqrt");
  const double scale = std::max(max_abs(m), 1e-300);
  if (asymmetry(m) <= 1e-12 * scale) {
    const SymSpectrum spectrum = sym_eigen(0.5 * (m + m.transpose()));
    if (spectrum.eigenvalues.size() == 0 || spectrum.eigenvalues(0) > 0.0) {
      return sym_function(spectrum, [](double x) { return std::sqrt(x); });
    }
  }
  return denman_beavers_sqrt(m);
}

double hafnian(const Matrix& b) {
  require_square(b, "hafnian");
  const auto n = static_cast<std::size_t>(b.rows());
  if (n > kMaxHafnianDimension) {
    std::ostringstream os;
    os << "hafnian: dimension " << n << " exceeds the enumeration cap " << kMaxHafnianDimension;
    throw std::invalid_argument(os.str());
  }
  if (n % 2 == 1) return 0.0;
  if (n == 0) return 1.0;

  // Depth-first walk over perfect matchings with an explicit stack. Level k
  // pairs the lowest still-free index with partner[k]; products[k] is the
  // running product up to and including level k.
  const std::size_t pairs = n / 2;
  std::vector<bool> used(n, false);
  std::vector<std::size_t> first(pairs), partner(pairs);
  std::vector<double> products(pairs + 1, 1.0);
  double total = 0.0;

  auto lowest_free = [&]() {
    std::size_t i = 0;
    while (used[i]) ++i;
    return i;
  };
  auto next_free_after = [&](std::size_t j) {
    ++j;
    while (j < n && used[j]) ++j;
    return j;
  };

  std::size_t level = 0;
  first[0] = 0;
  used[0] = true;
  partner[0] = next_free_after(0);
  while (true) {
    if (partner[level] >= n) {
      // Exhausted partners at this level: backtrack.
      used[first[level]] = false;
      if (level == 0) break;
      --level;
      used[partner[level]] = false;
      partner[level] = next_free_after(partner[level]);
      continue;
    }
    const std::size_t i = first[level];
    const std::size_t j = partner[level];
    used[j] = true;
    products[level + 1] = products[level] * b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (level + 1 == pairs) {
      total += products[pairs];
      used[j] = false;
      partner[level] = next_free_after(j);
      continue;
    }
    ++level;
    first[level] = lowest_free();
    used[first[level]] = true;
    partner[level] = next_free_after(first[level]);
  }
  return total;
}

std::size_t RepeatedHafnian::KeyHash::operator()(const std::vector<int>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : v) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

RepeatedHafnian::RepeatedHafnian(Eigen::MatrixXcd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw std::invalid_argument("RepeatedHafnian: matrix is not square");
}

std::complex<double> RepeatedHafnian::operator()(std::span<const int> multiplicities) {
  if (static_cast<Eigen::Index>(multiplicities.size()) != a_.rows()) {
    throw std::invalid_argument("RepeatedHafnian: multiplicity vector length does not match matrix");
  }
  std::vector<int> remaining(multiplicities.begin(), multiplicities.end());
  long total = 0;
  for (int k : remaining) {
    if (k < 0) throw std::invalid_argument("RepeatedHafnian: negative multiplicity");
    total += k;
  }
  if (total % 2 == 1) return {0.0, 0.0};
  const auto value = evaluate(remaining);
  return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

std::complex<long double> RepeatedHafnian::evaluate(std::vector<int>& remaining) {
  std::size_t i = 0;
  while (i < remaining.size() && remaining[i] == 0) ++i;
  if (i == remaining.size()) return {1.0L, 0.0L};

  if (auto it = cache_.find(remaining); it != cache_.end()) return it->second;
  const std::vector<int> key = remaining;

  // Pair one copy of index i with every remaining copy of each index j.
  std::complex<long double> total{0.0L, 0.0L};
  --remaining[i];
  for (std::size_t j = i; j < remaining.size(); ++j) {
    const int copies = remaining[j];
    if (copies == 0) continue;
    const std::complex<double> entry = a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (entry == std::complex<double>(0.0, 0.0)) continue;
    --remaining[j];
    const std::complex<long double> weight{static_cast<long double>(entry.real()),
                                           static_cast<long double>(entry.imag())};
    total += static_cast<long double>(copies) * weight * evaluate(remaining);
    ++remaining[j];
  }
  ++remaining[i];
  cache_.emplace(key, total);
  return total;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        double abs_tol) {
  if (panels < 1) throw std::invalid_argument("integrate_panels: need at least one panel");
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double width = (b - a) / panels;
  double total = 0.0;
  double error = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    double panel_error = 0.0;
    // One rule per panel; refinement comes from the panel count.
    total += Rule::integrate(f, lo, hi, 0, 0.0, &panel_error);
    error += panel_error;
  }
  if (!std::isfinite(total) || error > abs_tol) {
    std::ostringstream os;
    os << "integrate_panels: estimated error " << error << " exceeds " << abs_tol;
    throw NumericalError(os.str(), error);
  }
  return total;
}

double quad_oscillatory(const std::function<double(double)>& f, int harmonic) {
  const int panels = 32 * std::max(1, std::abs(harmonic));
  // The Kronrod estimates are far above the true error here (about 1e-15 for
  // the massless π correlator), so the budget is per panel.
  return integrate_panels(f, 0.0, std::numbers::pi, panels, 1e-11 * panels) / std::numbers::pi;
}

Maximum maximize_1d(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("maximize_1d: empty bracket");
  if (!(tol > 0.0)) throw std::invalid_argument("maximize_1d: tolerance must be positive");
  constexpr double kInvPhi = 0.6180339887498948482;
  constexpr int kMaxIterations = 200;
  int evaluations = 0;
  auto eval = [&](double x) {
    ++evaluations;
    return f(x);
  };

  for (int attempt = 0;; ++attempt) {
    const double width = hi - lo;
    double c = hi - kInvPhi * width;
    double d = lo + kInvPhi * width;
    double fc = eval(c);
    double fd = eval(d);
    const double flo = eval(lo);
    const double fhi = eval(hi);
    const double interior = std::max(fc, fd);
    if (flo > interior || fhi > interior) {
      if (attempt == 3) {
        throw NumericalError("maximize_1d: maximum is not bracketed after widening", std::max(flo, fhi) - interior);
      }
      if (flo > fhi) {
        lo -= width;
      } else {
        hi += width;
      }
      continue;
    }

    for (int it = 0; it < kMaxIterations && (hi - lo) > tol; ++it) {
      if (fc >= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - kInvPhi * (hi - lo);
        fc = eval(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + kInvPhi * (hi - lo);
        fd = eval(d);
      }
    }
    const double x = 0.5 * (lo + hi);
    const double fx = eval(x);
    if (fc > fx && fc >= fd) return {c, fc, evaluations};
    if (fd > fx) return {d, fd, evaluations};
    return {x, fx, evaluations};
  }
}

double elliptic_k_complement(double k_prime) {
  if (!(k_prime > 0.0) || k_prime > 1.0) {
    throw std::invalid_argument("elliptic_k_complement: complementary modulus must lie in (0, 1]");
  }
  double a = 1.0;
  double g = k_prime;
  for (int it = 0; it < 64 && std::abs(a - g) > 1e-16 * a; ++it) {
    const double next = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = next;
  }
  return std::numbers::pi / (2.0 * a);
}

}  // namespace ionfield::numerics
