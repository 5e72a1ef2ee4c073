// ionfield: negativity, fidelity and Fock-space sweeps for ion chains and the
// lattice scalar vacuum.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionfield/error.hpp"
#include "ionfield/experiments.hpp"
#include "ionfield/golden.hpp"
#include "ionfield/ion_chain.hpp"

namespace ex = ionfield::experiments;
namespace golden = ionfield::golden;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kGoldenFailure = 3 };

struct Global {
  std::string out;
  std::string format = "csv";
  int threads = 1;
  std::string tol_policy = "default";
};

// "a:b" or "a:b:step" (inclusive) or "a,b,c".
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size()) throw std::invalid_argument("bad integer '" + s + "' in '" + text + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<int> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(to_int(p));
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("range must be lo:hi or lo:hi:step");
    const int step = parts.size() == 3 ? parts[2] : 1;
    if (step <= 0 || parts[1] < parts[0]) throw std::invalid_argument("empty range '" + text + "'");
    for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ',')) out.push_back(to_int(p));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

double to_json_number(double x) { return std::stod(ex::format_number(x)); }

json tolerances(const Global& g) {
  const auto policy = golden::parse_policy(g.tol_policy);
  return {{"policy", golden::to_string(policy)},
          {"policy_factor", golden::policy_factor(policy)},
          {"unit_symplectic", ionfield::gaussian::kUnitSymplecticTolerance},
          {"squeeze_log_z", 1e-7},
          {"quadrature_panel_error", 1e-11}};
}

class Run {
public:
  Run(std::string command, const Global& g) : command_(std::move(command)), global_(g) {}

  json params = json::object();
  json metadata = json::object();

  // CSV text (or the JSON form of the rows) goes to --out or stdout; the
  // manifest goes next to --out.
  void emit(const std::string& csv, const json& rows) const {
    const std::string body = global_.format == "json" ? rows.dump(2) + "\n" : csv;
    if (global_.out.empty()) {
      std::cout << body;
      return;
    }
    write_file(global_.out, body);
    write_file(global_.out + ".manifest.json", manifest().dump(2) + "\n");
  }

  json manifest() const {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return {{"command", command_},
            {"params", params},
            {"version", IONFIELD_VERSION},
            {"tolerances", tolerances(global_)},
            {"metadata", metadata},
            {"wall_ms", ms}};
  }

private:
  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
  }

  std::string command_;
  const Global& global_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_chain(const Global& g, int ions) {
  if (ions < 1 || ions > ionfield::ion_chain::kMaxIons) throw std::invalid_argument("--ions must lie in [1, 300]");
  const auto model = ionfield::ion_chain::build_model(ions);
  Run run("chain", g);
  run.params = {{"ions", ions}};

  json rows = json::array();
  std::ostringstream text;
  text << "ions," << ions << "\nindex,position,frequency\n";
  for (int i = 0; i < ions; ++i) {
    text << i << ',' << ex::format_number(model.positions(i)) << ',' << ex::format_number(model.frequencies(i)) << '\n';
    rows.push_back({{"index", i},
                    {"position", to_json_number(model.positions(i))},
                    {"frequency", to_json_number(model.frequencies(i))}});
  }
  json report = {{"ions", ions}, {"modes", rows}};
  if (ions <= 6) {
    const auto cm = ionfield::ion_chain::local_mode_cm(model);
    text << "covariance\n";
    json matrix = json::array();
    for (Eigen::Index i = 0; i < cm.matrix().rows(); ++i) {
      json r = json::array();
      for (Eigen::Index j = 0; j < cm.matrix().cols(); ++j) {
        text << (j ? "," : "") << ex::format_number(cm(i, j));
        r.push_back(to_json_number(cm(i, j)));
      }
      text << '\n';
      matrix.push_back(r);
    }
    report["covariance"] = matrix;
  }
  run.emit(text.str(), report);
  return kOk;
}

int cmd_negativity(const Global& g, const std::string& system, int chain_size, int region_size,
                   const std::string& separations, const std::string& treatment) {
  ex::NegativityRequest req{ex::parse_system(system), chain_size, region_size, parse_int_list(separations),
                            ex::parse_treatment(treatment)};
  Run run("negativity", g);
  run.params = {{"system", system},
                {"chain_size", req.system == ex::System::ion ? json(chain_size) : json("inf")},
                {"region_size", region_size},
                {"separations", req.separations},
                {"treatment", treatment},
                {"threads", g.threads}};
  const auto sweep = ex::negativity_sweep(req, g.threads);
  for (int r : sweep.skipped)
    std::cerr << "warning: separation " << r << " skipped, 2d + r = " << 2 * region_size + r << " exceeds N = "
              << chain_size << '\n';
  run.metadata = {{"skipped_separations", sweep.skipped},
                  {"scalar_conditioning", req.system == ex::System::scalar ? "exact infinite lattice" : "n/a"},
                  {"scalar_mass", req.system == ex::System::scalar ? json(1e-10) : json(nullptr)}};
  json rows = json::array();
  for (const auto& r : sweep.rows)
    rows.push_back({{"system", ex::to_string(r.system)},
                    {"chain_size", r.chain_size ? json(*r.chain_size) : json("inf")},
                    {"region_size", r.region_size},
                    {"separation", r.separation},
                    {"treatment", ex::to_string(r.treatment)},
                    {"log_negativity", to_json_number(r.log_negativity)}});
  run.emit(ex::to_csv(sweep), rows);
  return kOk;
}

int cmd_fidelity(const Global& g, int chain_size, const std::string& sizes) {
  ex::FidelityRequest req{chain_size, parse_int_list(sizes)};
  Run run("fidelity", g);
  run.params = {{"chain_size", chain_size}, {"region_sizes", req.region_sizes}, {"threads", g.threads}};
  run.metadata = {{"squeeze_bracket", {0.5, 20.0}}, {"region_placement", "centred, extra ion to the right"}};
  const auto result = ex::fidelity_sweep(req, g.threads);
  json rows = json::array();
  for (const auto& r : result)
    rows.push_back({{"chain_size", r.chain_size},
                    {"region_size", r.region_size},
                    {"squeeze_z", to_json_number(r.squeeze_z)},
                    {"fidelity_raw", to_json_number(r.fidelity_raw)},
                    {"fidelity_squeezed", to_json_number(r.fidelity_squeezed)}});
  run.emit(ex::to_csv(result), rows);
  return kOk;
}

int cmd_fock(const Global& g, const std::string& dims) {
  const auto list = parse_int_list(dims);
  Run run("fock", g);
  run.params = {{"qudit_dims", list}, {"threads", g.threads}};
  run.metadata = {{"state", "two-ion local modes"}, {"p_out", "direct sum over excluded Fock states"}};
  const auto result = ex::fock_sweep(list, g.threads);
  json rows = json::array();
  for (const auto& r : result)
    rows.push_back({{"qudit_dim", r.qudit_dim},
                    {"p_out_raw", to_json_number(r.p_out_raw)},
                    {"p_out_squeezed", to_json_number(r.p_out_squeezed)}});
  run.emit(ex::to_csv(result), rows);
  return kOk;
}

int cmd_golden_check(const Global& g, const std::string& table, const std::string& dir, std::size_t worst) {
  const auto policy = golden::parse_policy(g.tol_policy);
  std::vector<std::string> ids;
  if (table == "all")
    ids = golden::kTableIds;
  else
    ids = {table};

  // Load everything first so a missing file is a usage error before any
  // work starts.
  std::vector<golden::Table> tables;
  for (const auto& id : ids) {
    try {
      tables.push_back(golden::read_table(golden::table_path(dir, id)));
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(e.what());
    }
  }

  Run run("golden-check", g);
  run.params = {{"tables", ids}, {"golden_dir", dir}, {"threads", g.threads}};
  bool all_pass = true;
  std::ostringstream text;
  text << "table,cells,failures,status\n";
  json summary = json::array();
  std::ostringstream details;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto report = golden::check_loaded(tables[i], ids[i], policy, g.threads);
    all_pass = all_pass && report.passed();
    text << ids[i] << ',' << report.cells.size() << ',' << report.failures() << ','
         << (report.passed() ? "PASS" : "FAIL") << '\n';
    json worst_cells = json::array();
    for (const auto& c : report.worst(worst)) {
      details << "table " << ids[i] << " [" << c.row << "][" << c.column << "] golden " << c.golden.text
              << " computed " << ex::format_number(c.computed) << " allowed " << ex::format_number(c.allowed)
              << (c.pass ? "" : "  FAIL") << '\n';
      worst_cells.push_back({{"row", c.row},
                             {"column", c.column},
                             {"golden", c.golden.text},
                             {"computed", to_json_number(c.computed)},
                             {"allowed", c.allowed},
                             {"pass", c.pass}});
    }
    summary.push_back({{"table", ids[i]},
                       {"cells", report.cells.size()},
                       {"failures", report.failures()},
                       {"pass", report.passed()},
                       {"worst", worst_cells}});
  }
  std::cerr << details.str();
  run.metadata = {{"passed", all_pass}};
  run.emit(text.str(), summary);
  return all_pass ? kOk : kGoldenFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-mode entanglement of trapped-ion chains vs the lattice scalar vacuum", "ionfield"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", IONFIELD_VERSION);

  Global g;
  app.add_option("--out", g.out, "Write results to PATH (manifest goes to PATH.manifest.json)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--tol-policy", g.tol_policy, "Golden tolerance policy")->check(CLI::IsMember({"default", "strict"}));

  int ions = 2;
  auto* chain = app.add_subcommand("chain", "Equilibrium, normal modes and (N <= 6) covariance of an N-ion chain");
  chain->add_option("--ions,-N", ions, "Number of ions")->required();

  std::string system = "ion", treatment = "trace", separations = "0:10";
  int chain_size = ex::kDefaultChainSize, region_size = 1;
  auto* neg = app.add_subcommand("negativity", "Log-negativity between two regions vs separation");
  neg->add_option("--system", system, "ion|scalar")->check(CLI::IsMember({"ion", "scalar"}));
  neg->add_option("--chain-size,-N", chain_size, "Ions in the chain (ion system only)");
  neg->add_option("--region-size,-d", region_size, "Modes per region");
  neg->add_option("--separations,-r", separations, "lo:hi[:step] or a,b,c");
  neg->add_option("--treatment", treatment, "trace|phi|pi")->check(CLI::IsMember({"trace", "phi", "pi"}));

  int fid_chain = 30;
  std::string sizes = "2:30:2";
  auto* fid = app.add_subcommand("fidelity", "Fidelity of central ion modes with the scalar vacuum");
  fid->add_option("--chain-size,-N", fid_chain, "Ions in the chain");
  fid->add_option("--region-sizes,-W", sizes, "lo:hi[:step] or a,b,c");

  std::string dims = "2:8";
  auto* fock = app.add_subcommand("fock", "Two-ion weight outside the lowest D Fock levels");
  fock->add_option("--dims,-D", dims, "lo:hi[:step] or a,b,c");

  std::string table = "all";
  std::string golden_dir = std::getenv("IONFIELD_GOLDEN_DIR") ? std::getenv("IONFIELD_GOLDEN_DIR")
                                                               : IONFIELD_DEFAULT_GOLDEN_DIR;
  std::size_t worst = 3;
  auto* gold = app.add_subcommand("golden-check", "Recompute golden tables and compare");
  gold->add_option("--table", table, "1..7, rho or all");
  gold->add_option("--golden-dir", golden_dir, "Directory holding the golden CSVs");
  gold->add_option("--worst", worst, "Worst cells reported per table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*chain) return cmd_chain(g, ions);
    if (*neg) return cmd_negativity(g, system, chain_size, region_size, separations, treatment);
    if (*fid) return cmd_fidelity(g, fid_chain, sizes);
    if (*fock) return cmd_fock(g, dims);
    if (*gold) return cmd_golden_check(g, table, golden_dir, worst);
  } catch (const ionfield::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
