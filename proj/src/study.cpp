#include "prismfem/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace prismfem {

namespace {

std::vector<double> orders_of(const StudyResult& result, double ErrorNorms::* norm) {
  std::vector<double> errors;
  for (const StudyRow& row : result.rows) {
    if (row.failed) return {};
    errors.push_back(row.errors.*norm);
  }
  if (errors.size() < 2) return {};
  for (double e : errors)
    if (!(e > 0.0)) return {};
  return convergence_orders(errors);
}

std::string format_order(const std::vector<double>& orders, size_t row) {
  if (row == 0 || orders.size() < row) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", orders[row - 1]);
  return buf;
}

} // namespace

bool StudyResult::all_solved() const {
  for (const StudyRow& row : rows)
    if (row.failed) return false;
  return !rows.empty();
}

std::vector<double> StudyResult::orders_l2() const { return orders_of(*this, &ErrorNorms::l2); }
std::vector<double> StudyResult::orders_h1() const { return orders_of(*this, &ErrorNorms::h1); }
std::vector<double> StudyResult::orders_h2() const { return orders_of(*this, &ErrorNorms::h2); }

StudyResult run_study(const StudyConfig& config, std::ostream* progress) {
  bool compatible = (config.element == ElementKind::H1 && config.problem == Problem::Poisson) ||
                    (config.element == ElementKind::H2 && config.problem == Problem::Biharmonic);
  if (!compatible)
    throw std::invalid_argument("run_study: h1 pairs with poisson, h2 with biharmonic");
  if (config.levels.empty()) throw std::invalid_argument("run_study: no levels given");

  ExactSolution exact = manufactured_solution(config.problem);
  StudyResult result;
  result.config = config;

  for (int n : config.levels) {
    StudyRow row;
    row.n = n;
    try {
      if (progress) *progress << "level n=" << n << ": meshing...\n" << std::flush;
      PrismMesh mesh = build_structured_mesh(n, config.pattern, config.theta);
      std::vector<CellFrame> frames = compute_all_frames(mesh);

      if (progress) *progress << "level n=" << n << ": assembling...\n" << std::flush;
      AssemblyOptions assembly_options;
      assembly_options.quad_stiffness = config.quad_assembly;
      assembly_options.quad_load = config.quad_error;
      SparseSystem system = assemble(mesh, frames, config.element, exact.source, assembly_options);
      row.free_dofs = system.dofs.n_free;

      SolveOptions solve_options;
      solve_options.rel_tol = config.tol;
      solve_options.max_iter = config.max_iter;
      switch (config.solver) {
        case SolverChoice::Direct: solve_options.method = SolveMethod::DirectCholesky; break;
        case SolverChoice::Cg: solve_options.method = SolveMethod::ConjugateGradient; break;
        case SolverChoice::Auto:
          solve_options.method = (n <= 16) ? SolveMethod::DirectCholesky
                                           : SolveMethod::ConjugateGradient;
          break;
      }

      if (progress) *progress << "level n=" << n << ": solving (" << system.dofs.n_free
                              << " dofs)...\n" << std::flush;
      auto t0 = std::chrono::steady_clock::now();
      SolveInfo info;
      Eigen::VectorXd x = solve_spd(system, solve_options, &info);
      auto t1 = std::chrono::steady_clock::now();
      row.solve_seconds = std::chrono::duration<double>(t1 - t0).count();

      if (!config.dump_matrix_path.empty()) {
        std::ofstream out(config.dump_matrix_path + ".n" + std::to_string(n));
        dump_matrix(system, out);
      }

      row.errors = error_norms(mesh, frames, system.dofs, x, exact, config.quad_error);
      if (progress)
        *progress << "level n=" << n << ": solved in " << row.solve_seconds << " s ("
                  << info.iterations << " iterations)\n" << std::flush;
    } catch (const std::exception& err) {
      row.failed = true;
      row.diagnostic = err.what();
      if (progress) *progress << "level n=" << n << ": FAILED: " << err.what() << "\n" << std::flush;
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string format_scientific(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3E", value);
  std::string s = buf;
  size_t e = s.find('E');
  if (e == std::string::npos) return s;
  std::string mantissa = s.substr(0, e);
  std::string exponent = s.substr(e + 1);
  bool negative = !exponent.empty() && exponent[0] == '-';
  if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) exponent.erase(0, 1);
  size_t first = exponent.find_first_not_of('0');
  exponent = (first == std::string::npos) ? "0" : exponent.substr(first);
  return mantissa + "E" + (negative ? "-" : "") + exponent;
}

std::string format_table(const StudyResult& result, TableFormat format) {
  bool with_h2 = result.config.element == ElementKind::H2;
  std::vector<std::string> header = {"n", "dofs"};
  if (with_h2) {
    header.insert(header.end(), {"h2_error", "h2_order"});
  }
  header.insert(header.end(), {"h1_error", "h1_order", "l2_error", "l2_order"});

  auto o_l2 = result.orders_l2();
  auto o_h1 = result.orders_h1();
  auto o_h2 = result.orders_h2();

  std::vector<std::vector<std::string>> body;
  for (size_t r = 0; r < result.rows.size(); ++r) {
    const StudyRow& row = result.rows[r];
    std::vector<std::string> cells = {std::to_string(row.n)};
    if (row.failed) {
      cells.push_back("failed: " + row.diagnostic);
      while (cells.size() < header.size()) cells.emplace_back();
    } else {
      cells.push_back(std::to_string(row.free_dofs));
      if (with_h2) {
        cells.push_back(format_scientific(row.errors.h2));
        cells.push_back(format_order(o_h2, r));
      }
      cells.push_back(format_scientific(row.errors.h1));
      cells.push_back(format_order(o_h1, r));
      cells.push_back(format_scientific(row.errors.l2));
      cells.push_back(format_order(o_l2, r));
    }
    body.push_back(std::move(cells));
  }

  std::ostringstream os;
  if (format == TableFormat::Csv) {
    for (size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << "\n";
    for (const auto& cells : body) {
      for (size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
      os << "\n";
    }
  } else {
    std::vector<size_t> width(header.size());
    for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& cells : body)
      for (size_t c = 0; c < cells.size(); ++c) width[c] = std::max(width[c], cells[c].size());
    auto emit_row = [&](const std::vector<std::string>& cells) {
      os << "|";
      for (size_t c = 0; c < header.size(); ++c) {
        std::string cell = c < cells.size() ? cells[c] : "";
        os << " " << cell << std::string(width[c] - cell.size(), ' ') << " |";
      }
      os << "\n";
    };
    emit_row(header);
    os << "|";
    for (size_t c = 0; c < header.size(); ++c) os << std::string(width[c] + 2, '-') << "|";
    os << "\n";
    for (const auto& cells : body) emit_row(cells);
  }
  return os.str();
}

} // namespace prismfem
