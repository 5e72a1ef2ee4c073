#include "ionfield/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ionfield/error.hpp"
#include "ionfield/fock.hpp"
#include "ionfield/ion_chain.hpp"
#include "ionfield/scalar_field.hpp"

namespace ionfield::experiments {

using gaussian::CovarianceMatrix;
using gaussian::Quadrature;
using gaussian::RegionSpec;

std::string_view to_string(System s) { return s == System::ion ? "ion" : "scalar"; }

std::string_view to_string(Treatment t) {
  switch (t) {
    case Treatment::trace: return "trace";
    case Treatment::phi: return "phi";
    case Treatment::pi: return "pi";
  }
  return "?";
}

System parse_system(std::string_view name) {
  if (name == "ion") return System::ion;
  if (name == "scalar") return System::scalar;
  throw std::invalid_argument("unknown system '" + std::string(name) + "' (expected ion|scalar)");
}

Treatment parse_treatment(std::string_view name) {
  if (name == "trace") return Treatment::trace;
  if (name == "phi") return Treatment::phi;
  if (name == "pi") return Treatment::pi;
  throw std::invalid_argument("unknown treatment '" + std::string(name) + "' (expected trace|phi|pi)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

namespace {

Quadrature measured_quadrature(Treatment t) { return t == Treatment::phi ? Quadrature::phi : Quadrature::pi; }

std::vector<int> iota_modes(int begin, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

}  // namespace

CovarianceMatrix region_state(System system, const CovarianceMatrix* chain_cm, int chain_size, int region_size,
                              int separation, Treatment treatment) {
  if (system == System::ion) {
    if (chain_cm == nullptr || chain_cm->modes() != chain_size)
      throw std::invalid_argument("region_state: ion chain covariance missing or of wrong size");
    RegionSpec spec{chain_size, region_size, separation};
    spec.validate();
    if (treatment == Treatment::trace) return gaussian::restrict(*chain_cm, spec.both());
    return gaussian::condition_homodyne(*chain_cm, spec.exterior(), measured_quadrature(treatment));
  }
  RegionSpec spec{2 * region_size + separation, region_size, separation};
  spec.validate();
  const scalar_field::ScalarFieldSpec field{scalar_field::kMasslessRegime, spec.total};
  const auto sites = spec.both();
  if (treatment == Treatment::trace) return gaussian::restrict(scalar_field::scalar_vacuum_cm(field), sites);
  return scalar_field::condition_exterior(field, sites, measured_quadrature(treatment));
}

NegativitySweep negativity_sweep(const NegativityRequest& request, int threads) {
  if (request.region_size < 1) throw std::invalid_argument("negativity: region size must be ≥ 1");
  const bool ion = request.system == System::ion;
  if (ion && (request.chain_size < 2 || request.chain_size > ion_chain::kMaxIons))
    throw std::invalid_argument("negativity: chain size outside [2, 300]");

  std::vector<int> separations = request.separations;
  std::sort(separations.begin(), separations.end());
  separations.erase(std::unique(separations.begin(), separations.end()), separations.end());

  NegativitySweep sweep;
  std::vector<int> feasible;
  for (int r : separations) {
    if (r < 0) throw std::invalid_argument("negativity: negative separation");
    if (ion && 2 * request.region_size + r > request.chain_size)
      sweep.skipped.push_back(r);
    else
      feasible.push_back(r);
  }

  std::optional<CovarianceMatrix> chain;
  if (ion) chain = ion_chain::local_mode_cm(ion_chain::build_model(request.chain_size));

  const int d = request.region_size;
  const auto a = iota_modes(0, d);
  const auto b = iota_modes(d, d);
  sweep.rows = parallel_map<NegativityRow>(feasible.size(), threads, [&](std::size_t i) {
    const int r = feasible[i];
    const auto state = region_state(request.system, chain ? &*chain : nullptr, request.chain_size, d, r,
                                    request.treatment);
    const auto spectrum = gaussian::pt_symplectic_spectrum(state, b);
    NegativityRow row{request.system,
                      ion ? std::optional<int>(request.chain_size) : std::nullopt,
                      d,
                      r,
                      request.treatment,
                      gaussian::log_negativity(state, a, b),
                      spectrum.minCoeff(),
                      spectrum.minCoeff() >= 1.0 - gaussian::kUnitSymplecticTolerance};
    if (!std::isfinite(row.log_negativity) || row.log_negativity < 0.0) {
      std::ostringstream os;
      os << "negativity: invalid value " << row.log_negativity << " at separation " << r;
      throw NumericalError(os.str(), row.log_negativity);
    }
    return row;
  });
  return sweep;
}

std::string to_csv(const NegativitySweep& sweep) {
  std::string out(kNegativityHeader);
  out += '\n';
  for (const auto& row : sweep.rows) {
    out += to_string(row.system);
    out += ',';
    out += row.chain_size ? std::to_string(*row.chain_size) : "inf";
    out += ',' + std::to_string(row.region_size) + ',' + std::to_string(row.separation) + ',';
    out += to_string(row.treatment);
    out += ',' + format_number(row.log_negativity) + '\n';
  }
  return out;
}

int central_offset(int chain_size, int region_size) { return (chain_size - region_size) / 2; }

std::vector<FidelityRow> fidelity_sweep(const FidelityRequest& request, int threads) {
  const int n = request.chain_size;
  if (n < 1 || n > ion_chain::kMaxIons) throw std::invalid_argument("fidelity: chain size outside [1, 300]");
  std::vector<int> sizes = request.region_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int w : sizes)
    if (w < 1 || w > n) throw std::invalid_argument("fidelity: region size must lie in [1, N]");

  const auto chain = ion_chain::local_mode_cm(ion_chain::build_model(n));
  return parallel_map<FidelityRow>(sizes.size(), threads, [&](std::size_t i) {
    const int w = sizes[i];
    const auto source = gaussian::restrict(chain, iota_modes(central_offset(n, w), w));
    const auto target = scalar_field::scalar_vacuum_cm({scalar_field::kMasslessRegime, w});
    const auto best = gaussian::optimize_global_squeeze(source, target, request.log_tol);
    return FidelityRow{n, w, best.z, gaussian::fidelity(source, target), best.fidelity};
  });
}

std::string to_csv(const std::vector<FidelityRow>& rows) {
  std::string out(kFidelityHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.chain_size) + ',' + std::to_string(r.region_size) + ',' + format_number(r.squeeze_z) +
           ',' + format_number(r.fidelity_raw) + ',' + format_number(r.fidelity_squeezed) + '\n';
  }
  return out;
}

CovarianceMatrix two_ion_state() { return ion_chain::local_mode_cm(ion_chain::build_model(2)); }

CovarianceMatrix two_ion_state_balanced() {
  const auto raw = two_ion_state();
  const std::vector<int> both{0, 1};
  return gaussian::apply_symplectic(raw, gaussian::single_mode_squeeze(2, fock::normal_form_squeeze(raw, 0), both));
}

std::vector<FockRow> fock_sweep(std::span<const int> qudit_dims, int threads) {
  std::vector<int> dims(qudit_dims.begin(), qudit_dims.end());
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  for (int d : dims)
    if (d < 1 || d > fock::kMaxQuditDimension) throw std::invalid_argument("fock: qudit dimension outside [1, 8]");
  const auto raw = two_ion_state();
  const auto balanced = two_ion_state_balanced();
  return parallel_map<FockRow>(dims.size(), threads, [&](std::size_t i) {
    return FockRow{dims[i], fock::qudit_subspace_deficit(raw, dims[i]), fock::qudit_subspace_deficit(balanced, dims[i])};
  });
}

std::string to_csv(const std::vector<FockRow>& rows) {
  std::string out(kFockHeader);
  out += '\n';
  for (const auto& r : rows)
    out += std::to_string(r.qudit_dim) + ',' + format_number(r.p_out_raw) + ',' + format_number(r.p_out_squeezed) + '\n';
  return out;
}

}  // namespace ionfield::experiments
