// rfd: D-optimal designs for two-level main-effects models on a region with
// a bounded number of high levels per run.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rfd/rfd.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitVerification = 2;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bounds {
  int factors = 0;
  int lower = 0;
  int upper = 0;

  rfd::OrbitSpace space() const { return rfd::OrbitSpace(factors, lower, upper); }
};

void add_bounds(CLI::App* cmd, Bounds& b) {
  cmd->add_option("-K", b.factors, "number of factors")->required();
  cmd->add_option("-L", b.lower, "minimal number of high levels")->required();
  cmd->add_option("-U", b.upper, "maximal number of high levels")->required();
}

// --tolerance beats RFD_TOLERANCE, which beats the built-in default.
double resolve_tolerance(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RFD_TOLERANCE"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size() && v >= 0.0) return v;
    } catch (const std::exception&) {
    }
    throw InvalidInput(std::string("RFD_TOLERANCE is not a nonnegative number: ") + env);
  }
  return rfd::kDefaultEquivalenceTolerance;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), {}};
  }
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot read weights file '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json sensitivity_json(const rfd::EquivalenceReport& r) {
  nlohmann::json psi = nlohmann::json::object();
  nlohmann::json slack = nlohmann::json::object();
  for (const auto& [k, v] : r.sensitivity) psi[std::to_string(k)] = v;
  for (const auto& [k, v] : r.slack_per_orbit) slack[std::to_string(k)] = v;
  return {{"pass", r.pass},
          {"max_sensitivity", r.max_sensitivity},
          {"argmax_orbit", r.argmax_orbit},
          {"bound", r.bound},
          {"tolerance", r.tolerance},
          {"sensitivity", psi},
          {"slack", slack}};
}

std::string certificate_line(const rfd::EquivalenceReport& r) {
  std::ostringstream out;
  out << (r.pass ? "pass" : "FAIL") << " (max psi " << rfd::format_fixed(r.max_sensitivity, 9)
      << " at orbit " << r.argmax_orbit << ", bound " << r.bound << ", tolerance " << r.tolerance
      << ")";
  return out.str();
}

// ---- solve -----------------------------------------------------------------

int run_solve(const Bounds& b, rfd::OutputFormat format, double tolerance) {
  const auto report = rfd::solve(b.space(), tolerance);
  const auto& design = report.design;
  switch (format) {
    case rfd::OutputFormat::Json: {
      nlohmann::json decimal = nlohmann::json::object();
      for (const auto& [k, w] : design.weights()) decimal[std::to_string(k)] = w;
      nlohmann::json out = {{"K", b.factors},
                            {"L", b.lower},
                            {"U", b.upper},
                            {"case", rfd::to_string(report.region.tag)},
                            {"discriminant", report.region.discriminant},
                            {"construction", rfd::to_string(report.construction)},
                            {"weights", rfd::weights_to_json(design)},
                            {"weights_decimal", decimal},
                            {"efficiency", report.efficiency},
                            {"certificate", sensitivity_json(report.certificate)}};
      std::cout << out.dump(2) << "\n";
      break;
    }
    case rfd::OutputFormat::Csv: {
      std::cout << "orbit,weight,exact\n";
      for (const auto& [k, w] : design.weights()) {
        std::cout << k << "," << rfd::format_full(w) << ","
                  << (design.is_exact() ? rfd::to_string(design.exact_weights()->at(k)) : "")
                  << "\n";
      }
      break;
    }
    case rfd::OutputFormat::Table: {
      std::cout << "K = " << b.factors << ", L = " << b.lower << ", U = " << b.upper << "\n"
                << "case: " << rfd::to_string(report.region.tag) << " (discriminant "
                << report.region.discriminant << ")\n"
                << "construction: " << rfd::to_string(report.construction) << "\n";
      rfd::TextTable t{"optimal orbit weights", {"orbit", "weight", "exact"}, {}};
      for (const auto& [k, w] : design.weights()) {
        t.rows.push_back({std::to_string(k), rfd::format_fixed(w),
                          design.is_exact() ? rfd::to_string(design.exact_weights()->at(k))
                                            : rfd::format_fixed(w, 12)});
      }
      std::cout << rfd::render_text(t) << "efficiency: " << rfd::format_fixed(report.efficiency)
                << "\ncertificate: " << certificate_line(report.certificate) << "\n";
      break;
    }
    case rfd::OutputFormat::PmText:
      throw InvalidInput("pm-text output is only available for design matrices");
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const Bounds& b, const std::string& path, bool with_oracle,
               rfd::OutputFormat format, double tolerance) {
  const auto space = b.space();
  const auto design = [&] {
    try {
      return rfd::parse_weights_text(read_input(path), space);
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(e.what());
    }
  }();

  rfd::EquivalenceReport report;
  try {
    report = rfd::equivalence_check(design, tolerance);
  } catch (const rfd::SingularDesign& e) {
    std::cerr << "rfd: singular design: " << e.what() << "\n";
    return kExitVerification;
  }

  std::optional<rfd::OracleResult> oracle;
  if (with_oracle && space.factors() >= 2) oracle = rfd::brute_force_solve(space);
  const double det = rfd::det_information(design);

  if (format == rfd::OutputFormat::Json) {
    nlohmann::json out = sensitivity_json(report);
    out["det"] = det;
    out["efficiency"] = rfd::d_efficiency(design);
    if (oracle) {
      nlohmann::json ow = nlohmann::json::object();
      for (const auto& [k, w] : oracle->clamped_weights()) ow[std::to_string(k)] = w;
      out["oracle"] = {{"det", oracle->det},
                       {"weights", ow},
                       {"iterations", oracle->iterations},
                       {"converged", oracle->converged},
                       {"relative_det_gap", (oracle->det - det) / oracle->det}};
    }
    std::cout << out.dump(2) << "\n";
  } else if (format == rfd::OutputFormat::Table || format == rfd::OutputFormat::Csv) {
    rfd::TextTable t{"sensitivity per orbit", {"orbit", "psi", "slack", "support"}, {}};
    for (const auto& [k, psi] : report.sensitivity) {
      t.rows.push_back({std::to_string(k), rfd::format_fixed(psi, 9),
                        rfd::format_fixed(report.slack_per_orbit.at(k), 9),
                        std::string(design.weight(k) > 0.0 ? "yes" : "no")});
    }
    if (format == rfd::OutputFormat::Csv) {
      std::cout << rfd::render_csv(t);
    } else {
      std::cout << rfd::render_text(t) << "det: " << rfd::format_full(det) << "\n"
                << "efficiency: " << rfd::format_fixed(rfd::d_efficiency(design)) << "\n"
                << "result: " << certificate_line(report) << "\n";
      if (oracle) {
        std::cout << "oracle: det " << rfd::format_full(oracle->det) << " after "
                  << oracle->iterations << " iterations ("
                  << (oracle->converged ? "converged" : "not converged")
                  << "), relative det gap " << (oracle->det - det) / oracle->det << "\n";
      }
    }
  } else {
    throw InvalidInput("pm-text output is only available for design matrices");
  }
  return report.pass ? kExitOk : kExitVerification;
}

// ---- exact -----------------------------------------------------------------

int run_exact(const Bounds& b, std::int64_t runs, rfd::OutputFormat format) {
  const auto report = rfd::solve(b.space());
  const auto exact = [&] {
    try {
      return rfd::round_to_exact(report.design, runs);
    } catch (const std::invalid_argument& e) {
      throw InvalidInput(e.what());
    }
  }();
  const auto rows = rfd::realize_matrix(exact);
  const double efficiency = rfd::exact_efficiency(exact);

  std::string allocation;
  for (const auto& [k, n] : exact.orbit_runs()) {
    allocation += " " + std::to_string(k) + ":" + std::to_string(n);
  }
  const std::string summary = "# orbit runs:" + allocation + "\n# efficiency " +
                              rfd::format_fixed(efficiency) + " (approximate optimum " +
                              rfd::format_fixed(report.efficiency) + ")\n";
  switch (format) {
    case rfd::OutputFormat::PmText:
      std::cout << rfd::to_pm_text(rows);
      std::cerr << summary;
      break;
    case rfd::OutputFormat::Csv:
      std::cout << rfd::to_csv(rows);
      std::cerr << summary;
      break;
    case rfd::OutputFormat::Table:
      std::cout << summary << rfd::to_pm_text(rows);
      break;
    case rfd::OutputFormat::Json: {
      nlohmann::json runs_json = nlohmann::json::object();
      for (const auto& [k, n] : exact.orbit_runs()) runs_json[std::to_string(k)] = n;
      nlohmann::json out = {{"K", b.factors},          {"L", b.lower},
                            {"U", b.upper},            {"N", runs},
                            {"orbit_runs", runs_json}, {"efficiency", efficiency},
                            {"rows", rfd::to_json(rows)}};
      std::cout << out.dump(2) << "\n";
      break;
    }
  }
  return kExitOk;
}

// ---- tables ----------------------------------------------------------------

std::string render_table(const rfd::TextTable& t, rfd::OutputFormat format) {
  switch (format) {
    case rfd::OutputFormat::Table: return rfd::render_text(t);
    case rfd::OutputFormat::Csv: return rfd::render_csv(t);
    case rfd::OutputFormat::Json: return rfd::render_json(t).dump(2) + "\n";
    case rfd::OutputFormat::PmText: break;
  }
  throw InvalidInput("pm-text output is only available for design matrices (table 4)");
}

std::string render_matrix_table(rfd::OutputFormat format) {
  const auto rows = rfd::tables::design_matrix();
  switch (format) {
    case rfd::OutputFormat::Table:
      return "# design for the invariant optimal two-orbit design, K = 6, L = 2, U = 4, N = 30\n" +
             rfd::to_pm_text(rows);
    case rfd::OutputFormat::PmText: return rfd::to_pm_text(rows);
    case rfd::OutputFormat::Csv: return rfd::to_csv(rows);
    case rfd::OutputFormat::Json: return rfd::to_json(rows).dump() + "\n";
  }
  return {};
}

int run_tables(const std::string& which, rfd::OutputFormat format) {
  auto one = [format](int n) -> std::string {
    switch (n) {
      case 1: return render_table(rfd::tables::two_orbit_table(), format);
      case 2: return render_table(rfd::tables::three_orbit_table(), format);
      case 3: return render_table(rfd::tables::four_orbit_table(), format);
      default: return render_matrix_table(format);
    }
  };
  if (which == "all") {
    if (format == rfd::OutputFormat::PmText) {
      throw InvalidInput("pm-text output is only available for design matrices (table 4)");
    }
    std::future<std::string> parts[4];
    for (int n = 1; n <= 4; ++n) parts[n - 1] = std::async(std::launch::async, one, n);
    if (format == rfd::OutputFormat::Json) {
      nlohmann::json out = nlohmann::json::object();
      for (int n = 1; n <= 4; ++n) {
        out["table" + std::to_string(n)] = nlohmann::json::parse(parts[n - 1].get());
      }
      std::cout << out.dump(2) << "\n";
    } else {
      for (int n = 1; n <= 4; ++n) std::cout << (n > 1 ? "\n" : "") << parts[n - 1].get();
    }
    return kExitOk;
  }
  if (which.size() != 1 || which[0] < '1' || which[0] > '4') {
    throw InvalidInput("unknown table '" + which + "' (expected 1, 2, 3, 4 or all)");
  }
  std::cout << one(which[0] - '0');
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-optimal designs for two-level main-effects models with bounded active levels"};
  app.require_subcommand(1);

  Bounds bounds;
  std::string format_name;
  std::optional<double> tolerance;

  auto* solve_cmd = app.add_subcommand("solve", "optimal invariant design for K, L, U");
  add_bounds(solve_cmd, bounds);
  solve_cmd->add_option("--format", format_name, "table, json or csv")->default_val("table");
  solve_cmd->add_option("--tolerance", tolerance, "equivalence-check tolerance");

  std::string weights_path;
  bool with_oracle = false;
  auto* verify_cmd = app.add_subcommand("verify", "certify orbit weights read from a JSON file");
  add_bounds(verify_cmd, bounds);
  verify_cmd->add_option("weights", weights_path, "weights file ('-' for stdin)")->required();
  verify_cmd->add_flag("--oracle", with_oracle, "compare with the multiplicative algorithm");
  verify_cmd->add_option("--format", format_name, "table, json or csv")->default_val("table");
  verify_cmd->add_option("--tolerance", tolerance, "equivalence-check tolerance");

  std::int64_t runs = 0;
  auto* exact_cmd = app.add_subcommand("exact", "exact N-run design matrix");
  add_bounds(exact_cmd, bounds);
  exact_cmd->add_option("-N", runs, "number of runs")->required();
  exact_cmd->add_option("--format", format_name, "pm-text, csv, json or table")
      ->default_val("pm-text");

  std::string which;
  auto* tables_cmd = app.add_subcommand("tables", "regenerate the reference tables");
  tables_cmd->add_option("which", which, "1, 2, 3, 4 or all")->default_val("all");
  tables_cmd->add_option("--format", format_name, "table, csv, json (pm-text for 4)")
      ->default_val("table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const auto format = rfd::parse_output_format(format_name);
    if (solve_cmd->parsed()) return run_solve(bounds, format, resolve_tolerance(tolerance));
    if (verify_cmd->parsed()) {
      return run_verify(bounds, weights_path, with_oracle, format, resolve_tolerance(tolerance));
    }
    if (exact_cmd->parsed()) return run_exact(bounds, runs, format);
    if (tables_cmd->parsed()) return run_tables(which, format);
  } catch (const InvalidInput& e) {
    std::cerr << "rfd: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rfd: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "rfd: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::length_error& e) {
    std::cerr << "rfd: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "rfd: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitInvalid;
}
