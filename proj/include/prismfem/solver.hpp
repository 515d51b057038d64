#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "prismfem/assembly.hpp"

namespace prismfem {

/// Manufactured solution: u with its gradient and Hessian, plus the matching
/// source (-laplace u for second order problems, bilaplace u for fourth
/// order ones).
struct ExactSolution {
  std::function<double(const Point3&)> u;
  std::function<Vec3(const Point3&)> grad;
  std::function<Eigen::Matrix3d(const Point3&)> hess;
  std::function<double(const Point3&)> source;
};

enum class SolveMethod { DirectCholesky, ConjugateGradient };

struct SolveOptions {
  SolveMethod method = SolveMethod::DirectCholesky;
  double rel_tol = 1e-12;    // CG only
  int max_iter = 100000;     // CG only
};

struct SolveInfo {
  int iterations = 0;        // 0 for the direct path
  double residual = 0.0;     // ||Ax - b|| / ||b|| (0 when b = 0)
};

/// Solves the reduced SPD system. Throws std::runtime_error with matrix
/// diagnostics on factorization failure or CG non-convergence.
Eigen::VectorXd solve_spd(const SparseSystem& system, const SolveOptions& options = {},
                          SolveInfo* info = nullptr);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = std::numeric_limits<double>::quiet_NaN();  // H2 elements only
};

/// Broken-norm errors of one cell given the 11 local basis coefficients.
ErrorNorms cell_error_norms(const CellFrame& frame, ElementKind kind,
                            const std::array<double, 11>& coeffs, const ExactSolution& exact,
                            int quad_degree = 8);

/// Discrete L2 / H1 / H2 errors of the assembled solution against the exact
/// one (cellwise quadrature, square-rooted sums). The H2 seminorm is only
/// reported for H2 elements.
ErrorNorms error_norms(const PrismMesh& mesh, const std::vector<CellFrame>& frames,
                       const DofMap& dofs, const Eigen::VectorXd& free_values,
                       const ExactSolution& exact, int quad_degree = 8);

/// Local coefficients of a cell from the global free-DoF vector (constrained
/// DoFs are zero; H2 face coefficients carry the scatter sign).
std::array<double, 11> gather_local_coeffs(const PrismMesh& mesh, const DofMap& dofs,
                                           const Eigen::VectorXd& free_values, int cell_id);

/// Orders log2(e_k / e_{k+1}) for errors measured on a sequence of meshes
/// with n doubling. Throws std::invalid_argument on non-positive errors or
/// fewer than two levels.
std::vector<double> convergence_orders(const std::vector<double>& errors);

} // namespace prismfem
