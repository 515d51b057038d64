#pragma once

#include <array>
#include <functional>

#include "prismfem/frame.hpp"
#include "prismfem/lambda_poly.hpp"

namespace prismfem {

/// 11-node prism element for second order problems: shape space
/// P2 + span{bubble}, degrees of freedom = values at the six vertices and
/// the five face centroids (in that order).
struct H1Basis {
  std::array<LambdaPoly, 11> phi;       // nodal basis, phi_i(node_j) = delta_ij
  std::array<Point3, 11> dof_node;      // V1..V6, M1..M5
  LambdaPoly bubble;                    // the cubic enriching P2
  std::array<LambdaPoly, 4> face_span;  // f1..f4, the horizontal-face interpolation span
};

/// Builds the nodal basis from its closed forms and asserts the
/// delta-property at the 11 nodes (throws std::runtime_error on failure).
H1Basis build_h1_basis(const CellFrame& frame);

using ScalarFn = std::function<double(const Point3&)>;

/// Local interpolation: coefficients of the nodal basis matching v at the
/// 11 nodes.
std::array<double, 11> h1_interpolate(const H1Basis& basis, const ScalarFn& v);

/// Interpolation onto span{f1..f4} on a horizontal face (face = 3 for the
/// bottom F4, 4 for the top F5), matching v at the face's three vertices
/// and its centroid. Coefficient order: f1, f2, f3, f4.
std::array<double, 4> face_interpolant_coeffs_h1(const CellFrame& frame, int face,
                                                 const ScalarFn& v);

/// The interpolant as a polynomial (sum of coefficients times f_i).
LambdaPoly face_interpolant_h1(const CellFrame& frame, const H1Basis& basis, int face,
                               const ScalarFn& v);

} // namespace prismfem
