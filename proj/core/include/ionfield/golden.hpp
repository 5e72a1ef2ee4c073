#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ionfield::golden {

enum class TolerancePolicy { standard, strict };

TolerancePolicy parse_policy(std::string_view name);  // "default" | "strict"
std::string_view to_string(TolerancePolicy p);
/// Half-width factor applied to one unit in the last printed place.
double policy_factor(TolerancePolicy p);

/// A reference value kept alongside its printed form so the number of
/// significant figures is known.
struct GoldenValue {
  std::string text;
  double value = 0.0;
  int significant_figures = 0;

  bool is_zero() const { return value == 0.0; }
};

/// "3.66e-1" → 3 s.f., "0.850" → 3, "4.119" → 4, "0" → zero.
GoldenValue parse_value(std::string_view text);

/// factor × 10^(floor(log10|g|) − s + 1); zero for golden zeros.
double allowed_deviation(const GoldenValue& g, TolerancePolicy p);

/// Plain comma-separated table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
};

Table read_table(const std::filesystem::path& path);

struct CellCheck {
  std::string row;     // e.g. "separation=3"
  std::string column;  // e.g. "ion_phi"
  GoldenValue golden;
  double computed = 0.0;
  double allowed = 0.0;
  bool pass = false;

  /// |computed − golden| / allowed; infinite for a failed golden zero.
  double severity() const;
};

/// A golden zero passes only if the computed state is exactly separable.
CellCheck compare(std::string row, std::string column, const GoldenValue& golden, double computed, bool exact_zero,
                  TolerancePolicy p);

struct Report {
  std::string table;
  std::vector<CellCheck> cells;

  bool passed() const;
  std::size_t failures() const;
  /// The `count` cells with the largest severity, worst first.
  std::vector<CellCheck> worst(std::size_t count) const;
};

/// Table identifiers: "1".."7" and "rho" (two-ion Fock block, levels 0..2).
inline const std::vector<std::string> kTableIds = {"1", "2", "3", "4", "5", "6", "7", "rho"};
std::filesystem::path table_path(const std::filesystem::path& dir, std::string_view id);

/// Recompute every cell of a golden table and compare it. Throws
/// std::invalid_argument for unknown ids and std::runtime_error when the
/// file is missing or malformed.
Report check_table(const std::filesystem::path& dir, std::string_view id, TolerancePolicy p, int threads = 1);

/// check_table for a table already in memory, e.g. a perturbed copy.
Report check_loaded(const Table& table, std::string_view id, TolerancePolicy p, int threads = 1);

}  // namespace ionfield::golden
