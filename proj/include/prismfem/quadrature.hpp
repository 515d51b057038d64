#pragma once

#include <vector>

#include "prismfem/frame.hpp"
#include "prismfem/geometry.hpp"

namespace prismfem {

/// Quadrature rule in physical coordinates; weights carry the physical
/// measure (cell volume or face area).
struct QuadRule {
  std::vector<Point3> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  double sum_weights() const;
};

/// Rule over the prism, exact for total degree <= d (triangle rule tensored
/// with Gauss-Legendre along x3). Supported d: 1..10; throws
/// std::invalid_argument outside that range.
QuadRule prism_rule(const CellFrame& frame, int degree);

/// Rule over one face (face = 0..4 for F1..F5), exact for bivariate degree
/// <= d on the face. Side quads use a tangential Gauss product, horizontal
/// triangles a symmetric triangle rule. Supported d: 1..10.
QuadRule face_rule(const CellFrame& frame, int face, int degree);

/// Gauss-Legendre nodes/weights on [0,1], exact to degree 2*npts - 1.
void gauss_legendre_01(int npts, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace prismfem
