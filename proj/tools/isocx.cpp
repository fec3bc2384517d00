// isocx command-line front end.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.

#include "isocx/catalog.hpp"
#include "isocx/convergence.hpp"
#include "isocx/io.hpp"
#include "isocx/log.hpp"
#include "isocx/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace isocx;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void print_conformity(const ConformityReport& report) {
  for (const auto& r : report.interfaces) {
    const auto& d = r.descriptor;
    std::cout << "interface " << r.index << ": patch " << d.patch_a << " " << to_string(d.side_a) << " <-> patch "
              << d.patch_b << " " << to_string(d.side_b) << " (" << to_string(d.orientation) << "): "
              << (r.ok() ? "ok" : "FAIL");
    if (!r.message.empty()) {
      std::cout << "  " << r.message;
    }
    std::cout << "\n";
  }
  for (const auto& e : report.errors) {
    std::cout << "error: " << e << "\n";
  }
}

int cmd_study(const std::string& path, const std::string& out_dir, std::uint64_t seed, bool seed_given) {
  StudyConfig config;
  MultipatchGeometry geom;
  try {
    config = io::load_study_config(path);
    if (seed_given) {
      config.seed = seed;
    }
    geom = study_geometry(config);
    std::vector<SplineComplex> complexes;
    for (const auto& kv : study_initial_knots(config, geom)) {
      complexes.push_back(build_complex(geom.dim, kv));
    }
    const auto conformity = validate_conformity(geom, complexes);
    if (!conformity.ok()) {
      std::cerr << "study: geometry and discretisation do not conform\n";
      print_conformity(conformity);
      return kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "study: " << e.what() << "\n";
    return kUsage;
  }

  StudyResult result;
  try {
    result = run_study(config);
  } catch (const ConformityError& e) {
    std::cerr << "study: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "study: " << e.what() << "\n";
    return kUsage;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string stem = fs::path(path).stem().string();
  const fs::path csv = fs::path(out_dir) / (stem + ".csv");
  const fs::path summary = fs::path(out_dir) / (stem + ".summary.json");
  std::ofstream csv_out(csv);
  std::ofstream json_out(summary);
  if (!csv_out || !json_out) {
    std::cerr << "study: cannot write to '" << out_dir << "'\n";
    return kUsage;
  }
  io::write_study_csv(csv_out, result);
  json_out << io::study_summary(result).dump(2) << "\n";

  std::cout << result.geometry_name << ", role " << config.role << ", projector " << to_string(config.projector)
            << ", solution " << config.solution << "\n";
  io::write_study_csv(std::cout, result);
  for (const auto& v : result.verdicts) {
    std::cout << to_string(v.norm) << ": expected " << v.expected << ", observed "
              << (v.exact ? std::string("exact") : fmt(v.observed)) << " -> " << (v.pass ? "ok" : "FAIL")
              << (v.asserted ? "" : " (not asserted)") << "\n";
  }
  if (result.max_commuting_residual > 0.0) {
    std::cout << "max commuting residual " << fmt(result.max_commuting_residual) << "\n";
  }
  std::cout << (result.passed ? "PASS" : "FAIL") << "  (" << csv.string() << ", " << summary.string() << ")\n";
  return result.passed ? kPass : kFail;
}

int cmd_verify(VerifyOptions options, const std::string& geometry, bool dim_given) {
  if (!geometry.empty()) {
    options.geometry = geometry;
    if (!dim_given) {
      try {
        options.dim = geometry_catalog(geometry).dim;
      } catch (const std::exception& e) {
        std::cerr << "verify-complex: " << e.what() << "\n";
        return kUsage;
      }
    }
  }
  VerifyReport report;
  try {
    report = verify_complex(options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "verify-complex: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << "geometry " << report.geometry_name << ", dim " << options.dim << ", degree " << options.degree
            << (options.corrupt_derivative ? ", corrupted derivative" : "") << "\n";
  for (const auto& e : report.exactness) {
    std::cout << "level " << e.level << " exactness " << e.composition << ": max |coefficient| = " << fmt(e.max_abs)
              << " over " << e.fields << " fields -> " << (e.pass ? "ok" : "FAIL") << "\n";
  }
  for (const auto& c : report.commuting) {
    std::cout << "level " << c.level << " commuting " << c.transition << " ("
              << (c.kind == ProjectorKind::tilde ? "tilde" : "plain") << "): " << fmt(c.residual) << " -> "
              << (c.pass ? "ok" : "FAIL") << "\n";
  }
  std::cout << (report.passed ? "PASS" : "FAIL") << "\n";
  return report.passed ? kPass : kFail;
}

int cmd_interface_check(const std::string& path, int degree, std::size_t elements, std::uint64_t seed) {
  io::GeometryFile file;
  try {
    file = io::load_geometry(path);
  } catch (const std::exception& e) {
    std::cerr << "interface-check: " << e.what() << "\n";
    return kUsage;
  }
  const auto& geom = file.geometry;
  if (file.knots.empty()) {
    file.knots.assign(geom.size(),
                      std::vector<KnotVector>(static_cast<std::size_t>(geom.dim), KnotVector::uniform(degree, elements)));
  }
  InterfaceCheckReport report;
  try {
    report = check_interfaces(geom, file.knots, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "interface-check: " << e.what() << "\n";
    return kUsage;
  }
  std::cout << geom.name << ": " << geom.size() << " patches, " << geom.interfaces.size() << " interfaces\n";
  print_conformity(report.conformity);
  if (!report.conformity.ok()) {
    std::cout << "FAIL: conformity\n";
    return kFail;
  }
  if (!report.error.empty()) {
    std::cout << "FAIL: " << report.error << "\n";
    return kFail;
  }
  // worst jump per (role, field)
  std::map<std::pair<int, std::string>, double> worst;
  for (const auto& j : report.jumps) {
    auto& w = worst[{j.role, j.field}];
    w = std::max(w, j.jump);
    if (!j.pass || log::level() >= log::Level::debug) {
      std::cout << "interface " << j.interface << " role " << j.role << " " << j.field << ": jump " << fmt(j.jump)
                << (j.pass ? "" : "  FAIL") << "\n";
    }
  }
  for (const auto& [key, w] : worst) {
    std::cout << "role " << key.first << " " << key.second << " field: max jump " << fmt(w) << "\n";
  }
  std::cout << (report.passed ? "PASS" : "FAIL") << "\n";
  return report.passed ? kPass : kFail;
}

int cmd_list() {
  for (const auto& name : catalog_names()) {
    std::cout << name << "  " << catalog_description(name) << "\n";
  }
  return kPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commuting spline quasi-interpolants: convergence studies and structural checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  bool verbose = false;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomised checks")->capture_default_str();
  app.add_flag("--verbose,-v", verbose, "Log progress");

  auto* study = app.add_subcommand("study", "Run a convergence study from a JSON config");
  std::string config_path;
  std::string out_dir = ".";
  study->add_option("config", config_path, "Study config (JSON)")->required();
  study->add_option("--out", out_dir, "Directory for the CSV and JSON summary")->capture_default_str();

  auto* verify = app.add_subcommand("verify-complex", "Check exactness and commuting diagrams");
  VerifyOptions vopt;
  std::string vgeom;
  auto* dim_opt = verify->add_option("--dim", vopt.dim, "Parametric dimension")->check(CLI::IsMember({2, 3}));
  verify->add_option("--degree", vopt.degree, "Spline degree")->check(CLI::Range(1, 8))->capture_default_str();
  verify->add_option("--levels", vopt.levels, "Number of meshes")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--elements", vopt.initial_elements, "Elements per axis on the first mesh")->capture_default_str();
  verify->add_option("--geometry", vgeom, "Catalog geometry");
  verify->add_option("--fields", vopt.random_fields, "Random fields per exactness check")->capture_default_str();
  verify->add_flag("--corrupt-derivative", vopt.corrupt_derivative, "Perturb the last derivative (test hook)");

  auto* iface = app.add_subcommand("interface-check", "Check interface conformity and jumps of a geometry file");
  std::string geom_path;
  int idegree = 2;
  std::size_t ielements = 2;
  iface->add_option("geometry", geom_path, "Geometry file (JSON)")->required();
  iface->add_option("--degree", idegree, "Degree when the file has no discretization")->capture_default_str();
  iface->add_option("--elements", ielements, "Elements when the file has no discretization")->capture_default_str();

  auto* list = app.add_subcommand("list-geometries", "List built-in geometries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  log::set_level(verbose ? log::Level::info : log::Level::warning);

  if (study->parsed()) {
    return cmd_study(config_path, out_dir, seed, seed_opt->count() > 0);
  }
  if (verify->parsed()) {
    vopt.seed = seed;
    return cmd_verify(vopt, vgeom, dim_opt->count() > 0);
  }
  if (iface->parsed()) {
    return cmd_interface_check(geom_path, idegree, ielements, seed);
  }
  if (list->parsed()) {
    return cmd_list();
  }
  return kUsage;
}
