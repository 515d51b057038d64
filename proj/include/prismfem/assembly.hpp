#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "prismfem/element_h1.hpp"
#include "prismfem/element_h2.hpp"
#include "prismfem/frame.hpp"
#include "prismfem/mesh.hpp"

namespace prismfem {

enum class ElementKind { H1, H2 };

/// Global numbering for the nonconforming spaces: one DoF per vertex
/// (value) and one per face (centroid value for H1, normal derivative along
/// the face's canonical global normal for H2). Boundary vertices and faces
/// are constrained to zero.
struct DofMap {
  ElementKind kind = ElementKind::H1;
  int n_vertices = 0;
  int n_faces = 0;
  int n_free = 0;
  std::vector<int> vertex_free_index;  // -1 when constrained
  std::vector<int> face_free_index;    // -1 when constrained
  // Per (cell, local face): +1 if the cell-outward normal equals the global
  // face normal, -1 if opposite. All +1 for H1.
  std::vector<std::array<int, 5>> cell_face_sign;

  int total_dofs() const { return n_vertices + n_faces; }
  /// Free index of a cell's local DoF i (0..10), or -1 when constrained.
  int free_index(const PrismCell& cell, int i) const;
  /// Scatter sign of a cell's local DoF i.
  double sign(int cell_id, int i) const;
};

DofMap build_dof_map(const PrismMesh& mesh, ElementKind kind);

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;  // symmetric, reduced to free DoFs
  Eigen::VectorXd rhs;
  DofMap dofs;
};

struct AssemblyOptions {
  int quad_stiffness = 6;
  int quad_load = 8;
};

/// Assembles the reduced system for (grad u, grad v) with H1 elements or
/// (hess u : hess v) with H2 elements, plus the load vector (f, v).
/// Homogeneous Dirichlet DoFs are eliminated. The matrix is assembled from
/// its lower triangle and mirrored, so it is exactly symmetric.
SparseSystem assemble(const PrismMesh& mesh, const std::vector<CellFrame>& frames,
                      ElementKind kind, const std::function<double(const Point3&)>& source,
                      const AssemblyOptions& options = {});

/// Element matrix through the analytic basis derivatives.
Eigen::Matrix<double, 11, 11> local_matrix(const CellFrame& frame, ElementKind kind,
                                           int quad_degree = 6);

/// Independent verification path: the same entries with basis gradients and
/// Hessians replaced by central finite differences of basis values.
Eigen::Matrix<double, 11, 11> local_matrix_oracle(const CellFrame& frame, ElementKind kind,
                                                  int quad_degree = 6);

/// Coordinate-format dump of the reduced matrix, `row col value` per line.
void dump_matrix(const SparseSystem& system, std::ostream& os);

} // namespace prismfem
