#include "ionfield/golden.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ionfield/experiments.hpp"
#include "ionfield/fock.hpp"

namespace ionfield::golden {

namespace ex = ionfield::experiments;

TolerancePolicy parse_policy(std::string_view name) {
  if (name == "default") return TolerancePolicy::standard;
  if (name == "strict") return TolerancePolicy::strict;
  throw std::invalid_argument("unknown tolerance policy '" + std::string(name) + "' (expected default|strict)");
}

std::string_view to_string(TolerancePolicy p) { return p == TolerancePolicy::strict ? "strict" : "default"; }

double policy_factor(TolerancePolicy p) { return p == TolerancePolicy::strict ? 0.5 : 0.6; }

GoldenValue parse_value(std::string_view text) {
  GoldenValue g;
  g.text = std::string(text);
  std::size_t used = 0;
  try {
    g.value = std::stod(g.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != g.text.size() || g.text.empty()) throw std::runtime_error("golden: not a number: '" + g.text + "'");

  std::string_view mantissa = text.substr(0, text.find_first_of("eE"));
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) mantissa.remove_prefix(1);
  bool leading = true;
  for (char c : mantissa) {
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++g.significant_figures;
  }
  return g;
}

double allowed_deviation(const GoldenValue& g, TolerancePolicy p) {
  if (g.is_zero()) return 0.0;
  const double exponent = std::floor(std::log10(std::abs(g.value))) - g.significant_figures + 1;
  return policy_factor(p) * std::pow(10.0, exponent);
}

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::runtime_error("golden: missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::runtime_error("golden: not an integer: '" + s + "'");
  return v;
}

}  // namespace

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("golden: cannot open " + path.string());
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (t.header.empty()) {
      t.header = split(line);
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size())
      throw std::runtime_error("golden: ragged row in " + path.string() + ": '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::runtime_error("golden: empty table " + path.string());
  return t;
}

double CellCheck::severity() const {
  const double dev = std::abs(computed - golden.value);
  if (allowed > 0.0) return dev / allowed;
  return pass ? 0.0 : std::numeric_limits<double>::infinity();
}

CellCheck compare(std::string row, std::string column, const GoldenValue& golden, double computed, bool exact_zero,
                  TolerancePolicy p) {
  CellCheck c{std::move(row), std::move(column), golden, computed, allowed_deviation(golden, p), false};
  if (golden.is_zero())
    c.pass = exact_zero;
  else
    c.pass = std::isfinite(computed) && std::abs(computed - golden.value) <= c.allowed;
  return c;
}

bool Report::passed() const { return failures() == 0 && !cells.empty(); }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.pass; }));
}

std::vector<CellCheck> Report::worst(std::size_t count) const {
  std::vector<CellCheck> sorted = cells;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CellCheck& a, const CellCheck& b) { return a.severity() > b.severity(); });
  if (sorted.size() > count) sorted.resize(count);
  return sorted;
}

std::filesystem::path table_path(const std::filesystem::path& dir, std::string_view id) {
  if (id == "rho") return dir / "rho_012.csv";
  if (std::find(kTableIds.begin(), kTableIds.end(), id) == kTableIds.end())
    throw std::invalid_argument("unknown golden table '" + std::string(id) + "' (expected 1..7 or rho)");
  return dir / ("table" + std::string(id) + ".csv");
}

namespace {

Report check_negativity(const Table& t, TolerancePolicy p, int threads) {
  Report r;
  const auto size_col = t.column("region_size");
  const auto sep_col = t.column("separation");
  std::vector<int> seps;
  int region = 0;
  for (const auto& row : t.rows) {
    seps.push_back(to_int(row[sep_col]));
    const int d = to_int(row[size_col]);
    if (region != 0 && d != region) throw std::runtime_error("golden: mixed region sizes in one table");
    region = d;
  }
  for (auto system : {ex::System::ion, ex::System::scalar}) {
    for (auto treatment : {ex::Treatment::trace, ex::Treatment::phi, ex::Treatment::pi}) {
      const std::string name = std::string(ex::to_string(system)) + "_" + std::string(ex::to_string(treatment));
      const auto col = t.column(name);
      const auto sweep =
          ex::negativity_sweep({system, ex::kDefaultChainSize, region, seps, treatment}, threads);
      std::map<int, const ex::NegativityRow*> by_sep;
      for (const auto& row : sweep.rows) by_sep[row.separation] = &row;
      for (const auto& row : t.rows) {
        const int s = to_int(row[sep_col]);
        const auto it = by_sep.find(s);
        if (it == by_sep.end()) throw std::runtime_error("golden: separation " + row[sep_col] + " infeasible");
        r.cells.push_back(compare("separation=" + row[sep_col], name, parse_value(row[col]),
                                  it->second->log_negativity, it->second->separable, p));
      }
    }
  }
  return r;
}

Report check_fidelity(const Table& t, TolerancePolicy p, int threads) {
  Report r;
  const auto n_col = t.column("chain_size");
  const auto w_col = t.column("region_size");
  std::map<int, std::vector<int>> by_chain;
  for (const auto& row : t.rows) by_chain[to_int(row[n_col])].push_back(to_int(row[w_col]));
  std::map<std::pair<int, int>, ex::FidelityRow> computed;
  for (const auto& [n, sizes] : by_chain)
    for (const auto& row : ex::fidelity_sweep({n, sizes}, threads)) computed[{n, row.region_size}] = row;
  for (const auto& row : t.rows) {
    const auto& c = computed.at({to_int(row[n_col]), to_int(row[w_col])});
    const std::string key = "chain_size=" + row[n_col] + ",region_size=" + row[w_col];
    r.cells.push_back(compare(key, "squeeze_z", parse_value(row[t.column("squeeze_z")]), c.squeeze_z, false, p));
    r.cells.push_back(
        compare(key, "fidelity_raw", parse_value(row[t.column("fidelity_raw")]), c.fidelity_raw, false, p));
    r.cells.push_back(compare(key, "fidelity_squeezed", parse_value(row[t.column("fidelity_squeezed")]),
                              c.fidelity_squeezed, false, p));
  }
  return r;
}

Report check_fock(const Table& t, TolerancePolicy p, int threads) {
  Report r;
  const auto d_col = t.column("qudit_dim");
  std::vector<int> dims;
  for (const auto& row : t.rows) dims.push_back(to_int(row[d_col]));
  std::map<int, ex::FockRow> computed;
  for (const auto& row : ex::fock_sweep(dims, threads)) computed[row.qudit_dim] = row;
  for (const auto& row : t.rows) {
    const auto& c = computed.at(to_int(row[d_col]));
    const std::string key = "qudit_dim=" + row[d_col];
    r.cells.push_back(compare(key, "p_out_raw", parse_value(row[t.column("p_out_raw")]), c.p_out_raw, false, p));
    r.cells.push_back(
        compare(key, "p_out_squeezed", parse_value(row[t.column("p_out_squeezed")]), c.p_out_squeezed, false, p));
  }
  return r;
}

/// Elements this small are the structural zeros of the two-ion state; they
/// come out at roundoff level rather than exactly.
constexpr double kStructuralZero = 1e-12;

fock::FockIndex parse_label(const std::string& label) {
  fock::FockIndex idx;
  for (char c : label) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::runtime_error("golden: bad Fock label '" + label + "'");
    idx.occupations.push_back(c - '0');
  }
  return idx;
}

Report check_rho(const Table& t, TolerancePolicy p) {
  Report r;
  fock::FockEvaluator evaluator(ex::two_ion_state());
  const auto row_col = t.column("row");
  const auto col_col = t.column("col");
  const auto val_col = t.column("value");
  for (const auto& row : t.rows) {
    const double x = evaluator.real_element(parse_label(row[row_col]), parse_label(row[col_col]));
    r.cells.push_back(compare("row=" + row[row_col], "col=" + row[col_col], parse_value(row[val_col]), x,
                              std::abs(x) <= kStructuralZero, p));
  }
  return r;
}

}  // namespace

Report check_loaded(const Table& table, std::string_view id, TolerancePolicy p, int threads) {
  Report r;
  if (id == "1" || id == "2" || id == "3")
    r = check_negativity(table, p, threads);
  else if (id == "4" || id == "5" || id == "6")
    r = check_fidelity(table, p, threads);
  else if (id == "7")
    r = check_fock(table, p, threads);
  else if (id == "rho")
    r = check_rho(table, p);
  else
    throw std::invalid_argument("unknown golden table '" + std::string(id) + "' (expected 1..7 or rho)");
  r.table = std::string(id);
  return r;
}

Report check_table(const std::filesystem::path& dir, std::string_view id, TolerancePolicy p, int threads) {
  return check_loaded(read_table(table_path(dir, id)), id, p, threads);
}

}  // namespace ionfield::golden
