#include "prismfem/element_h2.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace prismfem {

namespace {

void assert_nodal(const H2Basis& basis, const CellFrame& frame) {
  for (int j = 0; j < 11; ++j) {
    const LambdaPoly& shape = basis.psi[static_cast<size_t>(j)];
    for (int i = 0; i < 11; ++i) {
      double applied;
      if (i < 6) {
        applied = shape.value(frame, basis.vertex_node[static_cast<size_t>(i)]);
      } else {
        Jet2 jet = shape.evaluate(frame, basis.normal_node[static_cast<size_t>(i - 6)], 1);
        applied = basis.normal_direction[static_cast<size_t>(i - 6)].dot(jet.gradient);
      }
      double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(applied - expect) > 1e-9)
        throw std::runtime_error("h2 basis: nodal property violated at (" + std::to_string(i) +
                                 "," + std::to_string(j) + "), value " + std::to_string(applied));
    }
  }
}

} // namespace

H2Basis build_h2_basis(const CellFrame& frame) {
  using LP = LambdaPoly;
  H2Basis basis;

  std::array<LP, 6> L;
  for (int m = 0; m < 6; ++m) L[static_cast<size_t>(m)] = LP::lam(m);

  std::array<double, 3> grad_norm;
  for (int i = 0; i < 3; ++i)
    grad_norm[static_cast<size_t>(i)] = frame.lambda[static_cast<size_t>(i + 1)].gradient.norm();

  // 2D Morley basis over the bottom triangle.
  for (int i = 0; i < 3; ++i) {
    const LP& li = L[static_cast<size_t>(i + 1)];
    basis.q[static_cast<size_t>(i)] = (1.0 / grad_norm[static_cast<size_t>(i)]) * (li * li - li);
  }
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = side_face_pair(i);
    double gj_gk = frame.lambda[static_cast<size_t>(j + 1)].gradient.dot(
        frame.lambda[static_cast<size_t>(k + 1)].gradient);
    basis.p[static_cast<size_t>(i)] =
        L[static_cast<size_t>(i + 1)] + 2.0 * (L[static_cast<size_t>(j + 1)] * L[static_cast<size_t>(k + 1)]) -
        gj_gk * ((1.0 / grad_norm[static_cast<size_t>(j)]) * basis.q[static_cast<size_t>(j)] +
                 (1.0 / grad_norm[static_cast<size_t>(k)]) * basis.q[static_cast<size_t>(k)]);
  }

  LP l45 = L[4] * L[5];
  double g0_norm = frame.lambda[0].gradient.norm();

  auto& psi = basis.psi;
  for (int i = 0; i < 3; ++i) {
    LP vertical = L[0] * (L[static_cast<size_t>(i + 1)] - (1.0 / 6.0) * l45);
    psi[static_cast<size_t>(i)] = 0.5 * (basis.p[static_cast<size_t>(i)] - vertical);
    psi[static_cast<size_t>(i + 3)] = 0.5 * (basis.p[static_cast<size_t>(i)] + vertical);
    psi[static_cast<size_t>(i + 6)] = basis.q[static_cast<size_t>(i)];
  }
  psi[9] = (1.0 / (4.0 * g0_norm)) * (l45 - L[0] * l45);
  psi[10] = (1.0 / (4.0 * g0_norm)) * (l45 + L[0] * l45);

  for (int i = 0; i < 6; ++i) basis.vertex_node[static_cast<size_t>(i)] = frame.vertex[static_cast<size_t>(i)];
  for (int i = 0; i < 5; ++i) {
    basis.normal_node[static_cast<size_t>(i)] = frame.centroid[static_cast<size_t>(i)];
    basis.normal_direction[static_cast<size_t>(i)] = frame.outward_normal[static_cast<size_t>(i)];
  }

  assert_nodal(basis, frame);
  return basis;
}

std::array<double, 11> h2_interpolate(const H2Basis& basis, const ScalarFn& v,
                                      const GradientFn& grad_v) {
  std::array<double, 11> coeffs{};
  for (int i = 0; i < 6; ++i) coeffs[static_cast<size_t>(i)] = v(basis.vertex_node[static_cast<size_t>(i)]);
  for (int i = 0; i < 5; ++i)
    coeffs[static_cast<size_t>(i + 6)] =
        basis.normal_direction[static_cast<size_t>(i)].dot(grad_v(basis.normal_node[static_cast<size_t>(i)]));
  return coeffs;
}

std::array<double, 3> face_interpolant_coeffs_h2(const CellFrame& frame, int face,
                                                 const ScalarFn& v) {
  if (face != 3 && face != 4)
    throw std::invalid_argument("face_interpolant_coeffs_h2: face must be 3 (F4) or 4 (F5)");
  int base = (face == 3) ? 0 : 3;
  std::array<double, 3> coeffs{};
  for (int i = 0; i < 3; ++i)
    coeffs[static_cast<size_t>(i)] = v(frame.vertex[static_cast<size_t>(base + i)]);
  return coeffs;
}

LambdaPoly face_interpolant_h2(const CellFrame& frame, int face, const ScalarFn& v) {
  auto coeffs = face_interpolant_coeffs_h2(frame, face, v);
  LambdaPoly out;
  for (int i = 0; i < 3; ++i) out += coeffs[static_cast<size_t>(i)] * LambdaPoly::lam(i + 1);
  return out;
}

} // namespace prismfem
