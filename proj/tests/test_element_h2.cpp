#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prismfem/element_h2.hpp"
#include "prismfem/quadrature.hpp"
#include "support.hpp"

using namespace prismfem;
using namespace prismfem::testing;

namespace {

XPoly h2_bubble_xpoly(const CellFrame& fr) {
  return XPoly::affine(fr.lambda[0]) * XPoly::affine(fr.lambda[4]) * XPoly::affine(fr.lambda[5]);
}

double apply_dof(const CellFrame& fr, const H2Basis& basis, int i, const XPoly& p) {
  if (i < 6) return p.value(basis.vertex_node[static_cast<size_t>(i)]);
  (void)fr;
  return basis.normal_direction[static_cast<size_t>(i - 6)].dot(
      p.grad(basis.normal_node[static_cast<size_t>(i - 6)]));
}

// Independent nodal basis through the monomial Vandermonde system.
struct VandermondeH2 {
  std::vector<XPoly> monomials;
  Eigen::MatrixXd coeffs;

  VandermondeH2(const CellFrame& fr, const H2Basis& basis) {
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b)
        for (int c = 0; a + b + c <= 2; ++c) monomials.push_back(XPoly::monomial(a, b, c, 1.0));
    monomials.push_back(h2_bubble_xpoly(fr));
    REQUIRE(monomials.size() == 11);

    Eigen::MatrixXd v(11, 11);
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) v(i, j) = apply_dof(fr, basis, i, monomials[static_cast<size_t>(j)]);
    coeffs = v.fullPivLu().solve(Eigen::MatrixXd::Identity(11, 11));
  }

  double value(int i, const Point3& x) const {
    double acc = 0.0;
    for (int j = 0; j < 11; ++j) acc += coeffs(j, i) * monomials[static_cast<size_t>(j)].value(x);
    return acc;
  }
};

LambdaPoly random_q_member(Rng& rng) {
  LambdaPoly v = LambdaPoly::constant(rng.uniform(-1, 1));
  std::array<LambdaPoly, 3> axes = {LambdaPoly::lam(2), LambdaPoly::lam(3), LambdaPoly::lam(0)};
  for (int i = 0; i < 3; ++i) {
    v += rng.uniform(-1, 1) * axes[static_cast<size_t>(i)];
    for (int j = i; j < 3; ++j)
      v += rng.uniform(-1, 1) * (axes[static_cast<size_t>(i)] * axes[static_cast<size_t>(j)]);
  }
  v += rng.uniform(-1, 1) * (LambdaPoly::lam(0) * LambdaPoly::lam(4) * LambdaPoly::lam(5));
  return v;
}

} // namespace

TEST_CASE("Morley helper functions vanish and peak as required") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H2Basis basis = build_h2_basis(fr);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(basis.q[static_cast<size_t>(i)].value(fr, fr.vertex[static_cast<size_t>(j)])) < 1e-12);
        CHECK(basis.p[static_cast<size_t>(i)].value(fr, fr.vertex[static_cast<size_t>(j)]) ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        Jet2 qg = basis.q[static_cast<size_t>(i)].evaluate(fr, fr.edge_midpoint[static_cast<size_t>(j)], 1);
        Jet2 pg = basis.p[static_cast<size_t>(i)].evaluate(fr, fr.edge_midpoint[static_cast<size_t>(j)], 1);
        const Vec3& nj = fr.outward_normal[static_cast<size_t>(j)];
        CHECK(std::abs(nj.dot(qg.gradient) - (i == j ? 1.0 : 0.0)) < 1e-10);
        CHECK(std::abs(nj.dot(pg.gradient)) < 1e-10);
      }
  }
}

TEST_CASE("vertical shape normal derivatives on the reference prism") {
  CellFrame fr = reference_frame();
  H2Basis basis = build_h2_basis(fr);
  // psi_10 = lambda_4 lambda_5 (1 - lambda_0) / 8 = -x3 (1 - x3)^2 here;
  // its x3-derivative at the bottom is -1, dotted with the outward -e3 gives 1.
  Jet2 bottom = basis.psi[9].evaluate(fr, fr.centroid[3], 1);
  CHECK(bottom.gradient.z() == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(fr.outward_normal[3].dot(bottom.gradient) == doctest::Approx(1.0).epsilon(1e-13));
  Jet2 top = basis.psi[9].evaluate(fr, fr.centroid[4], 1);
  CHECK(std::abs(fr.outward_normal[4].dot(top.gradient)) < 1e-13);

  for (double z : {0.0, 0.3, 0.8}) {
    Point3 x(0.2, 0.1, z);
    CHECK(basis.psi[9].value(fr, x) == doctest::Approx(-z * (1 - z) * (1 - z)).epsilon(1e-13));
  }
}

TEST_CASE("11x11 DoF matrix is the identity") {
  Rng rng(32);
  for (int t = 0; t < 100; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H2Basis basis = build_h2_basis(fr);
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) {
        double applied;
        if (i < 6) {
          applied = basis.psi[static_cast<size_t>(j)].value(fr, basis.vertex_node[static_cast<size_t>(i)]);
        } else {
          Jet2 jet = basis.psi[static_cast<size_t>(j)].evaluate(fr, basis.normal_node[static_cast<size_t>(i - 6)], 1);
          applied = basis.normal_direction[static_cast<size_t>(i - 6)].dot(jet.gradient);
        }
        CHECK(std::abs(applied - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("closed-form basis matches the Vandermonde oracle") {
  Rng rng(33);
  for (int t = 0; t < 6; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H2Basis basis = build_h2_basis(fr);
    VandermondeH2 oracle(fr, basis);
    for (int s = 0; s < 20; ++s) {
      Point3 x = random_point_in(rng, fr);
      for (int i = 0; i < 11; ++i)
        CHECK(basis.psi[static_cast<size_t>(i)].value(fr, x) ==
              doctest::Approx(oracle.value(i, x)).epsilon(1e-8));
    }
  }
}

TEST_CASE("local interpolation reproduces quadratics and the vertical cubic") {
  Rng rng(34);
  for (int t = 0; t < 5; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H2Basis basis = build_h2_basis(fr);

    XPoly v = random_xpoly(rng, 2);
    auto coeffs = h2_interpolate(
        basis, [&](const Point3& x) { return v.value(x); },
        [&](const Point3& x) { return v.grad(x); });
    for (int s = 0; s < 50; ++s) {
      Point3 x = random_point_in(rng, fr);
      double interp = 0.0;
      for (int i = 0; i < 11; ++i)
        interp += coeffs[static_cast<size_t>(i)] * basis.psi[static_cast<size_t>(i)].value(fr, x);
      CHECK(std::abs(interp - v.value(x)) / std::max(1.0, std::abs(v.value(x))) < 1e-11);
    }

    XPoly cubic = h2_bubble_xpoly(fr);
    auto cubic_coeffs = h2_interpolate(
        basis, [&](const Point3& x) { return cubic.value(x); },
        [&](const Point3& x) { return cubic.grad(x); });
    for (int s = 0; s < 20; ++s) {
      Point3 x = random_point_in(rng, fr);
      double interp = 0.0;
      for (int i = 0; i < 11; ++i)
        interp += cubic_coeffs[static_cast<size_t>(i)] * basis.psi[static_cast<size_t>(i)].value(fr, x);
      CHECK(interp == doctest::Approx(cubic.value(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("interpolating the constant") {
  CellFrame fr = reference_frame();
  H2Basis basis = build_h2_basis(fr);
  auto coeffs = h2_interpolate(
      basis, [](const Point3&) { return 1.0; }, [](const Point3&) { return Vec3::Zero(); });
  for (int i = 0; i < 6; ++i) CHECK(coeffs[static_cast<size_t>(i)] == doctest::Approx(1.0));
  for (int i = 6; i < 11; ++i) CHECK(std::abs(coeffs[static_cast<size_t>(i)]) < 1e-14);

  Rng rng(35);
  for (int s = 0; s < 10; ++s) {
    Point3 x = random_point_in(rng, fr);
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) sum += basis.psi[static_cast<size_t>(i)].value(fr, x);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("P1 face interpolant") {
  CellFrame fr = reference_frame();
  Rng rng(36);

  AffineFn affine{Vec3(-0.4, 0.9, 0.0), 0.2};
  for (int face : {3, 4}) {
    LambdaPoly interp = face_interpolant_h2(fr, face, [&](const Point3& x) { return affine(x); });
    double z = (face == 3) ? 0.0 : 1.0;
    for (int s = 0; s < 10; ++s) {
      Point3 x = random_point_in(rng, fr);
      Point3 on_face(x.x(), x.y(), z);
      CHECK(interp.value(fr, on_face) == doctest::Approx(affine(on_face)).epsilon(1e-13));
    }
  }

  auto coeffs = face_interpolant_coeffs_h2(
      fr, 3, [&](const Point3& x) { return fr.lambda[2](x); });
  CHECK(std::abs(coeffs[0]) < 1e-14);
  CHECK(coeffs[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(coeffs[2]) < 1e-14);

  CHECK_THROWS_AS(face_interpolant_coeffs_h2(fr, 0, [](const Point3&) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("interpolation defects agree between bottom and top faces") {
  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    LambdaPoly v = random_q_member(rng);
    auto value_at = [&](const Point3& x) { return v.value(fr, x); };
    LambdaPoly j4 = face_interpolant_h2(fr, 3, value_at);
    LambdaPoly j5 = face_interpolant_h2(fr, 4, value_at);
    for (int s = 0; s < 20; ++s) {
      Point3 x = random_point_in(rng, fr);
      Point3 bot(x.x(), x.y(), fr.vertex[0].z());
      Point3 top(x.x(), x.y(), fr.vertex[3].z());
      double d4 = value_at(bot) - j4.value(fr, bot);
      double d5 = value_at(top) - j5.value(fr, top);
      CHECK(std::abs(d4 - d5) < 1e-10);
    }
  }
}

TEST_CASE("normal derivative mean equals its centroid value on every face") {
  CellFrame fr = reference_frame();
  Rng rng(38);
  for (int s = 0; s < 10; ++s) {
    LambdaPoly v = random_q_member(rng);
    for (int face = 0; face < 5; ++face) {
      QuadRule rule = face_rule(fr, face, 6);
      const Vec3& n = fr.outward_normal[static_cast<size_t>(face)];
      double integral = 0.0, area = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        integral += rule.weights[q] * n.dot(v.evaluate(fr, rule.points[q], 1).gradient);
        area += rule.weights[q];
      }
      double centroid_value = n.dot(v.evaluate(fr, fr.centroid[static_cast<size_t>(face)], 1).gradient);
      CHECK(std::abs(integral / area - centroid_value) < 1e-12);
    }
  }
}

TEST_CASE("side face tangential and vertical integral identities") {
  CellFrame fr = reference_frame();
  Rng rng(39);
  for (int s = 0; s < 10; ++s) {
    LambdaPoly v = random_q_member(rng);
    auto value_at = [&](const Point3& x) { return v.value(fr, x); };
    for (int i = 0; i < 3; ++i) {
      auto [j, k] = side_face_pair(i);
      QuadRule rule = face_rule(fr, i, 6);
      double int_t = 0.0, int_z = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        Vec3 g = v.evaluate(fr, rule.points[q], 1).gradient;
        int_t += rule.weights[q] * fr.tangent[static_cast<size_t>(i)].dot(g);
        int_z += rule.weights[q] * g.z();
      }
      double vj = value_at(fr.vertex[static_cast<size_t>(j)]), vk = value_at(fr.vertex[static_cast<size_t>(k)]);
      double vj3 = value_at(fr.vertex[static_cast<size_t>(j + 3)]), vk3 = value_at(fr.vertex[static_cast<size_t>(k + 3)]);
      CHECK(std::abs(int_t / fr.vertical_edge_length[static_cast<size_t>(j)] -
                     0.5 * (vk + vk3 - vj - vj3)) < 1e-12);
      CHECK(std::abs(int_z / fr.bottom_edge_length[static_cast<size_t>(i)] -
                     0.5 * (vj3 + vk3 - vj - vk)) < 1e-12);
    }
  }
}
