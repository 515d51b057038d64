#include "prismfem/solver.hpp"

#include "prismfem/quadrature.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>
#include <string>

namespace prismfem {

Eigen::VectorXd solve_spd(const SparseSystem& system, const SolveOptions& options,
                          SolveInfo* info) {
  const auto& A = system.matrix;
  const auto& b = system.rhs;
  double b_norm = b.norm();
  if (b_norm == 0.0) {
    if (info) *info = SolveInfo{};
    return Eigen::VectorXd::Zero(A.rows());
  }

  Eigen::VectorXd x;
  SolveInfo local_info;
  if (options.method == SolveMethod::DirectCholesky) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve_spd: Cholesky factorization failed (dim " +
                               std::to_string(A.rows()) + ", nnz " +
                               std::to_string(A.nonZeros()) + ", not SPD?)");
    x = llt.solve(b);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(options.rel_tol);
    cg.setMaxIterations(options.max_iter);
    cg.compute(A);
    x = cg.solve(b);
    local_info.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("solve_spd: CG did not reach tolerance " +
                               std::to_string(options.rel_tol) + " within " +
                               std::to_string(options.max_iter) + " iterations (dim " +
                               std::to_string(A.rows()) + ", error " + std::to_string(cg.error()) +
                               ")");
  }
  local_info.residual = (A * x - b).norm() / b_norm;
  if (info) *info = local_info;
  return x;
}

std::array<double, 11> gather_local_coeffs(const PrismMesh& mesh, const DofMap& dofs,
                                           const Eigen::VectorXd& free_values, int cell_id) {
  const PrismCell& cell = mesh.cells[static_cast<size_t>(cell_id)];
  std::array<double, 11> coeffs{};
  for (int i = 0; i < 11; ++i) {
    int g = dofs.free_index(cell, i);
    coeffs[static_cast<size_t>(i)] = (g >= 0) ? dofs.sign(cell_id, i) * free_values[g] : 0.0;
  }
  return coeffs;
}

ErrorNorms cell_error_norms(const CellFrame& frame, ElementKind kind,
                            const std::array<double, 11>& coeffs, const ExactSolution& exact,
                            int quad_degree) {
  LambdaPoly uh;
  if (kind == ElementKind::H1) {
    H1Basis basis = build_h1_basis(frame);
    for (int i = 0; i < 11; ++i) uh += coeffs[static_cast<size_t>(i)] * basis.phi[static_cast<size_t>(i)];
  } else {
    H2Basis basis = build_h2_basis(frame);
    for (int i = 0; i < 11; ++i) uh += coeffs[static_cast<size_t>(i)] * basis.psi[static_cast<size_t>(i)];
  }

  bool with_h2 = (kind == ElementKind::H2);
  QuadRule rule = prism_rule(frame, quad_degree);
  double acc_l2 = 0.0, acc_h1 = 0.0, acc_h2 = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const Point3& x = rule.points[q];
    double w = rule.weights[q];
    Jet2 jet = uh.evaluate(frame, x, with_h2 ? 2 : 1);
    double dv = exact.u(x) - jet.value;
    Vec3 dg = exact.grad(x) - jet.gradient;
    acc_l2 += w * dv * dv;
    acc_h1 += w * dg.squaredNorm();
    if (with_h2) {
      Eigen::Matrix3d dh = exact.hess(x) - jet.hessian();
      acc_h2 += w * dh.squaredNorm();
    }
  }
  ErrorNorms norms;
  norms.l2 = std::sqrt(acc_l2);
  norms.h1 = std::sqrt(acc_h1);
  if (with_h2) norms.h2 = std::sqrt(acc_h2);
  return norms;
}

ErrorNorms error_norms(const PrismMesh& mesh, const std::vector<CellFrame>& frames,
                       const DofMap& dofs, const Eigen::VectorXd& free_values,
                       const ExactSolution& exact, int quad_degree) {
  double acc_l2 = 0.0, acc_h1 = 0.0, acc_h2 = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    auto coeffs = gather_local_coeffs(mesh, dofs, free_values, c);
    ErrorNorms cell = cell_error_norms(frames[static_cast<size_t>(c)], dofs.kind, coeffs, exact,
                                       quad_degree);
    acc_l2 += cell.l2 * cell.l2;
    acc_h1 += cell.h1 * cell.h1;
    if (dofs.kind == ElementKind::H2) acc_h2 += cell.h2 * cell.h2;
  }
  ErrorNorms norms;
  norms.l2 = std::sqrt(acc_l2);
  norms.h1 = std::sqrt(acc_h1);
  if (dofs.kind == ElementKind::H2) norms.h2 = std::sqrt(acc_h2);
  return norms;
}

std::vector<double> convergence_orders(const std::vector<double>& errors) {
  if (errors.size() < 2)
    throw std::invalid_argument("convergence_orders: need at least two levels");
  for (double e : errors)
    if (!(e > 0.0))
      throw std::invalid_argument("convergence_orders: errors must be positive");
  std::vector<double> orders;
  orders.reserve(errors.size() - 1);
  for (size_t k = 0; k + 1 < errors.size(); ++k)
    orders.push_back(std::log2(errors[k] / errors[k + 1]));
  return orders;
}

} // namespace prismfem
