#include "ionfield/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ionfield/numerics.hpp"

namespace ionfield::scalar_field {

using gaussian::CovarianceMatrix;
using gaussian::Quadrature;
using numerics::Matrix;

void ScalarFieldSpec::validate() const {
  if (!(mass > 0.0) || window < 1) {
    std::ostringstream os;
    os << "ScalarFieldSpec: need m > 0 and W >= 1 (got m=" << mass << ", W=" << window << ")";
    throw std::invalid_argument(os.str());
  }
}

namespace {

double dispersion(double mass, double k) {
  const double s = 2.0 * std::sin(0.5 * k);
  return std::sqrt(mass * mass + s * s);
}

}  // namespace

double phi_correlator(double mass, int separation) {
  const double m2 = mass * mass;
  const double k_prime = mass / std::sqrt(m2 + 4.0);
  const double zero_mode = (2.0 / std::numbers::pi) * numerics::elliptic_k_complement(k_prime) / std::sqrt(m2 + 4.0);
  if (separation == 0) return zero_mode;
  const double delta = separation;
  // (cos(kΔ) − 1)/ω_k = −2 sin²(kΔ/2)/ω_k, finite at k = 0.
  auto remainder = [&](double k) {
    const double s = std::sin(0.5 * k * delta);
    return -2.0 * s * s / dispersion(mass, k);
  };
  return zero_mode + numerics::quad_oscillatory(remainder, separation);
}

double pi_correlator(double mass, int separation) {
  const double delta = separation;
  return numerics::quad_oscillatory([&](double k) { return dispersion(mass, k) * std::cos(k * delta); },
                                    separation);
}

CovarianceMatrix scalar_vacuum_cm(const ScalarFieldSpec& spec) {
  spec.validate();
  const Eigen::Index w = spec.window;
  std::vector<double> phi(static_cast<std::size_t>(w)), pi(static_cast<std::size_t>(w));
  for (int d = 0; d < spec.window; ++d) {
    phi[static_cast<std::size_t>(d)] = phi_correlator(spec.mass, d);
    pi[static_cast<std::size_t>(d)] = pi_correlator(spec.mass, d);
  }
  Matrix phi_block(w, w), pi_block(w, w);
  for (Eigen::Index i = 0; i < w; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      const auto d = static_cast<std::size_t>(std::abs(i - j));
      phi_block(i, j) = phi[d];
      pi_block(i, j) = pi[d];
    }
  }
  return CovarianceMatrix::from_blocks(phi_block, pi_block);
}

CovarianceMatrix condition_exterior(const ScalarFieldSpec& spec, std::span<const int> sites, Quadrature q) {
  const CovarianceMatrix kept = gaussian::restrict(scalar_vacuum_cm(spec), sites);
  const Quadrature conjugate = q == Quadrature::phi ? Quadrature::pi : Quadrature::phi;
  const Matrix conditioned = numerics::inverse(kept.quadrature_block(conjugate));
  const Matrix unchanged = kept.quadrature_block(conjugate);
  return q == Quadrature::phi ? CovarianceMatrix::from_blocks(conditioned, unchanged)
                              : CovarianceMatrix::from_blocks(unchanged, conditioned);
}

CovarianceMatrix condition_with_buffer(const ScalarFieldSpec& spec, std::span<const int> sites, Quadrature q,
                                       int buffer) {
  spec.validate();
  if (buffer < 0) throw std::invalid_argument("condition_with_buffer: negative buffer");
  ScalarFieldSpec extended = spec;
  extended.window = spec.window + 2 * buffer;
  const CovarianceMatrix full = scalar_vacuum_cm(extended);

  std::vector<bool> keep(static_cast<std::size_t>(extended.window), false);
  std::vector<int> shifted;
  for (int s : sites) {
    if (s < 0 || s >= spec.window) throw std::invalid_argument("condition_with_buffer: site outside window");
    keep[static_cast<std::size_t>(s + buffer)] = true;
    shifted.push_back(s + buffer);
  }
  std::vector<int> measured;
  for (int s = 0; s < extended.window; ++s)
    if (!keep[static_cast<std::size_t>(s)]) measured.push_back(s);

  // condition_homodyne keeps retained modes in ascending order; reorder to
  // match `sites`.
  const CovarianceMatrix conditioned = gaussian::condition_homodyne(full, measured, q);
  std::vector<int> ascending = shifted;
  std::sort(ascending.begin(), ascending.end());
  std::vector<int> order;
  for (int s : shifted)
    order.push_back(static_cast<int>(std::find(ascending.begin(), ascending.end(), s) - ascending.begin()));
  return gaussian::restrict(conditioned, order);
}

}  // namespace ionfield::scalar_field
