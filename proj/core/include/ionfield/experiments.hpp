#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ionfield/gaussian.hpp"

namespace ionfield::experiments {

enum class System { ion, scalar };
enum class Treatment { trace, phi, pi };

std::string_view to_string(System s);
std::string_view to_string(Treatment t);
/// Throw std::invalid_argument on unknown names.
System parse_system(std::string_view name);
Treatment parse_treatment(std::string_view name);

inline constexpr int kDefaultChainSize = 150;

/// `%.9g`, with "inf"/"nan" spelled out.
std::string format_number(double x);

/// Runs fn(0..count-1) on up to `threads` workers and returns results in
/// index order. The first exception thrown by any task is rethrown after
/// all workers stop.
template <class T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---- negativity ------------------------------------------------------------

struct NegativityRequest {
  System system = System::ion;
  int chain_size = kDefaultChainSize;  // ignored for the scalar field
  int region_size = 1;
  std::vector<int> separations;
  Treatment treatment = Treatment::trace;
};

struct NegativityRow {
  System system;
  std::optional<int> chain_size;  // empty for the infinite lattice
  int region_size;
  int separation;
  Treatment treatment;
  double log_negativity;
  double min_pt_eigenvalue;
  bool separable;  // every ν̃ ≥ 1 − kUnitSymplecticTolerance
};

struct NegativitySweep {
  std::vector<NegativityRow> rows;   // sorted by separation
  std::vector<int> skipped;          // separations with 2d + r̃ > N
};

/// Two-region state for one geometry before the negativity is taken; modes
/// 0..d−1 are region A, d..2d−1 region B.
gaussian::CovarianceMatrix region_state(System system, const gaussian::CovarianceMatrix* chain_cm, int chain_size,
                                        int region_size, int separation, Treatment treatment);

NegativitySweep negativity_sweep(const NegativityRequest& request, int threads = 1);

inline constexpr std::string_view kNegativityHeader =
    "system,chain_size,region_size,separation,treatment,log_negativity";
std::string to_csv(const NegativitySweep& sweep);

// ---- fidelity --------------------------------------------------------------

struct FidelityRequest {
  int chain_size = 30;
  std::vector<int> region_sizes;
  double log_tol = 1e-7;
};

struct FidelityRow {
  int chain_size;
  int region_size;
  double squeeze_z;
  double fidelity_raw;
  double fidelity_squeezed;
};

/// First ion of a centred block of `region_size` ions in a chain of
/// `chain_size`.
int central_offset(int chain_size, int region_size);

std::vector<FidelityRow> fidelity_sweep(const FidelityRequest& request, int threads = 1);

inline constexpr std::string_view kFidelityHeader = "chain_size,region_size,squeeze_z,fidelity_raw,fidelity_squeezed";
std::string to_csv(const std::vector<FidelityRow>& rows);

// ---- Fock ------------------------------------------------------------------

struct FockRow {
  int qudit_dim;
  double p_out_raw;
  double p_out_squeezed;
};

/// Two-ion local-mode state and its version with each mode squeezed to
/// equal quadrature variances.
gaussian::CovarianceMatrix two_ion_state();
gaussian::CovarianceMatrix two_ion_state_balanced();

std::vector<FockRow> fock_sweep(std::span<const int> qudit_dims, int threads = 1);

inline constexpr std::string_view kFockHeader = "qudit_dim,p_out_raw,p_out_squeezed";
std::string to_csv(const std::vector<FockRow>& rows);

}  // namespace ionfield::experiments
