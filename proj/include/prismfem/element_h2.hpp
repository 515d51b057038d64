#pragma once

#include <array>
#include <functional>

#include "prismfem/frame.hpp"
#include "prismfem/lambda_poly.hpp"

namespace prismfem {

/// 11-node prism element for fourth order problems: shape space
/// P2 + span{lambda_0 lambda_4 lambda_5}, degrees of freedom = values at the
/// six vertices and normal derivatives (cell-outward) at the five face
/// centroids.
struct H2Basis {
  std::array<LambdaPoly, 11> psi;   // nodal basis w.r.t. the DoF set above
  std::array<LambdaPoly, 3> p;      // embedded 2D Morley vertex functions
  std::array<LambdaPoly, 3> q;      // embedded 2D Morley edge functions
  std::array<Point3, 6> vertex_node;
  std::array<Point3, 5> normal_node;     // M1..M5
  std::array<Vec3, 5> normal_direction;  // cell-outward unit normals at M1..M5
};

H2Basis build_h2_basis(const CellFrame& frame);

using ScalarFn = std::function<double(const Point3&)>;
using GradientFn = std::function<Vec3(const Point3&)>;

/// Local interpolation: matches v at the six vertices and dv/dn (outward) at
/// the five face centroids.
std::array<double, 11> h2_interpolate(const H2Basis& basis, const ScalarFn& v,
                                      const GradientFn& grad_v);

/// P1 interpolation on a horizontal face (face = 3 for F4, 4 for F5):
/// coefficients of lambda_1, lambda_2, lambda_3 matching v at the face's
/// three vertices.
std::array<double, 3> face_interpolant_coeffs_h2(const CellFrame& frame, int face,
                                                 const ScalarFn& v);

LambdaPoly face_interpolant_h2(const CellFrame& frame, int face, const ScalarFn& v);

} // namespace prismfem
