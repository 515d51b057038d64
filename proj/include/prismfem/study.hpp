#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prismfem/problems.hpp"

namespace prismfem {

enum class TableFormat { Csv, Markdown };
enum class SolverChoice { Auto, Direct, Cg };  // Auto: direct for n <= 16, CG above

struct StudyConfig {
  ElementKind element = ElementKind::H1;
  Problem problem = Problem::Poisson;
  std::vector<int> levels = {4, 8, 16, 32};
  MeshPattern pattern = MeshPattern::Trapezoid;
  double theta = 0.2;
  int quad_assembly = 6;
  int quad_error = 8;
  SolverChoice solver = SolverChoice::Auto;
  double tol = 1e-12;
  int max_iter = 200000;
  TableFormat format = TableFormat::Csv;
  std::string dump_matrix_path;  // per-level `<path>.n<level>` when non-empty
};

struct StudyRow {
  int n = 0;
  int free_dofs = 0;
  ErrorNorms errors;
  double solve_seconds = 0.0;
  bool failed = false;
  std::string diagnostic;
};

struct StudyResult {
  StudyConfig config;
  std::vector<StudyRow> rows;

  bool all_solved() const;
  /// Orders per norm (l2 / h1 / h2) between consecutive solved rows.
  std::vector<double> orders_l2() const;
  std::vector<double> orders_h1() const;
  std::vector<double> orders_h2() const;
};

/// Runs one convergence study. Per-level failures become diagnostic rows
/// rather than aborting the study. Progress notes (timings included) go to
/// `progress` when given; the table itself stays deterministic.
StudyResult run_study(const StudyConfig& config, std::ostream* progress = nullptr);

/// Renders the study table. Errors use 4-significant-digit scientific
/// notation in the compact `2.142E1` style; orders use two decimals.
std::string format_table(const StudyResult& result, TableFormat format);

/// `%.3E`-style mantissa with the exponent stripped of plus signs and
/// leading zeros: 21.42 -> "2.142E1", 0.0925 -> "9.250E-2".
std::string format_scientific(double value);

} // namespace prismfem
