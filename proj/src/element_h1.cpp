#include "prismfem/element_h1.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace prismfem {

namespace {

void assert_nodal(const H1Basis& basis, const CellFrame& frame) {
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      double v = basis.phi[static_cast<size_t>(i)].value(frame, basis.dof_node[static_cast<size_t>(j)]);
      double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(v - expect) > 1e-9)
        throw std::runtime_error("h1 basis: nodal property violated at (" + std::to_string(i) +
                                 "," + std::to_string(j) + "), value " + std::to_string(v));
    }
}

} // namespace

H1Basis build_h1_basis(const CellFrame& frame) {
  using LP = LambdaPoly;
  H1Basis basis;

  std::array<LP, 6> L;
  for (int m = 0; m < 6; ++m) L[static_cast<size_t>(m)] = LP::lam(m);

  LP pair_sum = L[1] * L[2] + L[2] * L[3] + L[3] * L[1];
  LP l45 = L[4] * L[5];
  basis.bubble = (5.0 / 12.0) * (L[0] * l45) + L[0] * pair_sum;

  for (int i = 0; i < 3; ++i)
    basis.face_span[static_cast<size_t>(i)] = L[static_cast<size_t>(i + 1)] - pair_sum;
  basis.face_span[3] = 3.0 * pair_sum;

  auto& phi = basis.phi;
  // Side-centroid functions, then the top/bottom-centroid pair.
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = side_face_pair(i);
    const LP& li = L[static_cast<size_t>(i + 1)];
    phi[static_cast<size_t>(i + 6)] = (8.0 / 3.0) * (L[static_cast<size_t>(j + 1)] * L[static_cast<size_t>(k + 1)]) -
                                      (4.0 / 3.0) * (li - li * li) - (1.0 / 3.0) * l45;
  }
  LP centroid_core = 1.5 * pair_sum + (3.0 / 8.0) * l45;
  phi[9] = centroid_core - 1.5 * basis.bubble;
  phi[10] = centroid_core + 1.5 * basis.bubble;

  for (int i = 0; i < 3; ++i) {
    auto [j, k] = side_face_pair(i);
    LP shared = 0.25 * (phi[static_cast<size_t>(j + 6)] + phi[static_cast<size_t>(k + 6)]);
    const LP& li = L[static_cast<size_t>(i + 1)];
    phi[static_cast<size_t>(i)] = -0.5 * (li * L[5]) - shared - (1.0 / 3.0) * phi[9];
    phi[static_cast<size_t>(i + 3)] = 0.5 * (li * L[4]) - shared - (1.0 / 3.0) * phi[10];
  }

  for (int i = 0; i < 6; ++i) basis.dof_node[static_cast<size_t>(i)] = frame.vertex[static_cast<size_t>(i)];
  for (int i = 0; i < 5; ++i) basis.dof_node[static_cast<size_t>(i + 6)] = frame.centroid[static_cast<size_t>(i)];

  assert_nodal(basis, frame);
  return basis;
}

std::array<double, 11> h1_interpolate(const H1Basis& basis, const ScalarFn& v) {
  std::array<double, 11> coeffs{};
  for (int i = 0; i < 11; ++i) coeffs[static_cast<size_t>(i)] = v(basis.dof_node[static_cast<size_t>(i)]);
  return coeffs;
}

std::array<double, 4> face_interpolant_coeffs_h1(const CellFrame& frame, int face,
                                                 const ScalarFn& v) {
  if (face != 3 && face != 4)
    throw std::invalid_argument("face_interpolant_coeffs_h1: face must be 3 (F4) or 4 (F5)");
  int base = (face == 3) ? 0 : 3;
  std::array<double, 4> coeffs{};
  for (int i = 0; i < 3; ++i)
    coeffs[static_cast<size_t>(i)] = v(frame.vertex[static_cast<size_t>(base + i)]);
  coeffs[3] = v(frame.centroid[static_cast<size_t>(face)]);
  return coeffs;
}

LambdaPoly face_interpolant_h1(const CellFrame& frame, const H1Basis& basis, int face,
                               const ScalarFn& v) {
  auto coeffs = face_interpolant_coeffs_h1(frame, face, v);
  LambdaPoly out;
  for (int i = 0; i < 4; ++i) out += coeffs[static_cast<size_t>(i)] * basis.face_span[static_cast<size_t>(i)];
  return out;
}

} // namespace prismfem
