#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>

#include "prismfem/mesh.hpp"
#include "prismfem/problems.hpp"
#include "prismfem/study.hpp"
#include "prismfem/verify.hpp"

namespace {

using namespace prismfem;

int run_study_command(const StudyConfig& config, const std::string& out_path) {
#ifndef NDEBUG
  // Source-term transcription check; cheap and loud.
  for (Problem p : {Problem::Poisson, Problem::Biharmonic})
    if (source_self_check(p) > 1e-5) {
      std::cerr << "manufactured source self-check failed\n";
      return 2;
    }
#endif
  StudyResult result = run_study(config, &std::cerr);
  std::string table = format_table(result, config.format);
  if (out_path.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open output file " << out_path << "\n";
      return 2;
    }
    out << table;
  }
  return result.all_solved() ? 0 : 1;
}

int run_verify_command(unsigned long seed, int trials) {
  VerifyReport report = verify_identities(seed, trials);
  std::cout << format_report(report);
  return report.all_pass() ? 0 : 1;
}

int run_mesh_dump_command(int n, MeshPattern pattern, double theta, const std::string& out_path) {
  PrismMesh mesh = build_structured_mesh(n, pattern, theta);
  if (out_path.empty()) {
    write_mesh_dump(mesh, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open output file " << out_path << "\n";
      return 2;
    }
    write_mesh_dump(mesh, out);
  }
  return 0;
}

std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Expands `--config FILE` into option tokens: each `key=value` line becomes
// `--key value`, appended only when the flag is absent from the command
// line, so explicit flags win.
std::vector<std::string> apply_flat_config(std::vector<std::string> args) {
  std::string path;
  for (size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  if (path.empty()) return args;

  std::ifstream config(path);
  if (!config) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  while (std::getline(config, line)) {
    std::string entry = trim(line.substr(0, line.find('#')));
    if (entry.empty()) continue;
    size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + entry);
    std::string flag = "--" + trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    bool given = false;
    for (const std::string& arg : args)
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) given = true;
    if (!given) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming 11-node prism elements: convergence studies and identity checks"};
  app.require_subcommand(1);

  // study
  auto* study = app.add_subcommand("study", "Run a convergence study and emit its table");
  StudyConfig config;
  std::string element = "h1", problem = "poisson", mesh_pattern = "trapezoid", solver = "auto",
              format = "csv", out_path;
  std::vector<int> levels;
  study->add_option("--element", element, "Element: h1 or h2")->check(CLI::IsMember({"h1", "h2"}));
  study->add_option("--problem", problem, "Problem: poisson or biharmonic")
      ->check(CLI::IsMember({"poisson", "biharmonic"}));
  study->add_option("--levels", levels, "Mesh levels, e.g. 4,8,16")->delimiter(',');
  study->add_option("--mesh", mesh_pattern, "Mesh pattern: trapezoid or uniform")
      ->check(CLI::IsMember({"trapezoid", "uniform"}));
  study->add_option("--theta", config.theta, "Trapezoid offset in [0, 0.5)")->capture_default_str();
  study->add_option("--quad-assembly", config.quad_assembly, "Stiffness quadrature degree")->capture_default_str();
  study->add_option("--quad-error", config.quad_error, "Load/error quadrature degree")->capture_default_str();
  study->add_option("--solver", solver, "Solver: auto, direct or cg")
      ->check(CLI::IsMember({"auto", "direct", "cg"}));
  study->add_option("--tol", config.tol, "CG relative tolerance")->capture_default_str();
  study->add_option("--max-iter", config.max_iter, "CG iteration cap")->capture_default_str();
  study->add_option("--format", format, "Table format: csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  study->add_option("--out", out_path, "Write the table to this file instead of stdout");
  study->add_option("--dump-matrix", config.dump_matrix_path,
                    "Write each level's reduced matrix to <path>.n<level> (row col value lines)");
  std::string config_path_doc;
  study->add_option("--config", config_path_doc,
                    "Read options from a flat key=value file (flags win)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the element/lemma identity suite");
  unsigned long seed = 42;
  int trials = 100;
  verify->add_option("--trials", trials, "Number of random prisms")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Random seed")->capture_default_str();
  verify->add_option("--config", config_path_doc,
                     "Read options from a flat key=value file (flags win)");

  // mesh-dump
  auto* dump = app.add_subcommand("mesh-dump", "Write a structured mesh as plain text");
  int dump_n = 4;
  std::string dump_pattern = "trapezoid", dump_out;
  double dump_theta = 0.2;
  dump->add_option("--n", dump_n, "Subdivision count (even, >= 2)")->required();
  dump->add_option("--mesh", dump_pattern, "Mesh pattern: trapezoid or uniform")
      ->check(CLI::IsMember({"trapezoid", "uniform"}));
  dump->add_option("--theta", dump_theta, "Trapezoid offset in [0, 0.5)")->capture_default_str();
  dump->add_option("--out", dump_out, "Output path (stdout when omitted)");
  dump->add_option("--config", config_path_doc,
                   "Read options from a flat key=value file (flags win)");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_flat_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(study)) {
      config.element = (element == "h1") ? ElementKind::H1 : ElementKind::H2;
      config.problem = (problem == "poisson") ? Problem::Poisson : Problem::Biharmonic;
      config.pattern = (mesh_pattern == "uniform") ? MeshPattern::Uniform : MeshPattern::Trapezoid;
      config.format = (format == "markdown") ? TableFormat::Markdown : TableFormat::Csv;
      config.solver = (solver == "direct") ? SolverChoice::Direct
                      : (solver == "cg")   ? SolverChoice::Cg
                                           : SolverChoice::Auto;
      if (!levels.empty()) {
        config.levels = levels;
      } else {
        config.levels = (config.problem == Problem::Poisson) ? std::vector<int>{4, 8, 16, 32}
                                                             : std::vector<int>{4, 8, 16};
      }
      return run_study_command(config, out_path);
    }
    if (app.got_subcommand(verify)) return run_verify_command(seed, trials);
    if (app.got_subcommand(dump)) return run_mesh_dump_command(dump_n, dump_pattern == "uniform"
                                                                           ? MeshPattern::Uniform
                                                                           : MeshPattern::Trapezoid,
                                                               dump_theta, dump_out);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
