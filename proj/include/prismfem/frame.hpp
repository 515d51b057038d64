#pragma once

#include <array>
#include <vector>

#include "prismfem/geometry.hpp"
#include "prismfem/mesh.hpp"

namespace prismfem {

/// Per-cell affine coordinate system of a triangular prism.
///
/// lambda[1..3] are the barycentric coordinates of (x1, x2) in the bottom
/// triangle (independent of x3). lambda[4] vanishes on the bottom face and
/// equals 1 at the side-face centroids' height, lambda[5] vanishes on the
/// top face and equals -1 there, lambda[0] vanishes at mid-height with
/// lambda[0](V4) = 1. All three share the same constant gradient along x3.
struct CellFrame {
  std::array<Point3, 6> vertex;          // V1..V6
  std::array<AffineFn, 6> lambda;        // lambda[0] = lambda_0, ..., lambda[5] = lambda_5
  std::array<Point3, 5> centroid;        // M1..M5 (face centroids)
  std::array<Vec3, 5> outward_normal;    // n1..n5, unit, pointing out of the cell
  std::array<Vec3, 3> tangent;           // t_i on F_i, unit, from V_j to V_k
  std::array<Point3, 3> edge_midpoint;   // midpoints of bottom edges V_jV_k
  std::array<double, 3> bottom_edge_length;   // |V_jV_k|
  std::array<double, 3> vertical_edge_length; // |V_jV_{j+3}| (all equal the height)
  std::array<AffineFn, 3> xi;            // side-face linears: +1 at V_k/V_{k+3}, -1 at V_j/V_{j+3}
  std::array<AffineFn, 3> eta;           // side-face linears: +1 on top edge, -1 on bottom edge
  double height = 0.0;                   // top minus bottom x3
  double triangle_area = 0.0;            // bottom triangle area
  double volume = 0.0;

  double lam(int m, const Point3& x) const { return lambda[m](x); }
};

/// Cyclic (j, k) pair completing {i, j, k} = {0, 1, 2} for side face F_{i+1}.
inline std::pair<int, int> side_face_pair(int i) {
  return {(i + 1) % 3, (i + 2) % 3};
}

/// Builds the frame from six vertex positions (ordering as in PrismCell).
/// Throws std::runtime_error for degenerate cells.
CellFrame make_frame(const std::array<Point3, 6>& vertices);

CellFrame compute_frame(const PrismMesh& mesh, int cell_id);

std::vector<CellFrame> compute_all_frames(const PrismMesh& mesh);

} // namespace prismfem
