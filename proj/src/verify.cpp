#include "prismfem/verify.hpp"

#include "prismfem/assembly.hpp"
#include "prismfem/element_h1.hpp"
#include "prismfem/element_h2.hpp"
#include "prismfem/problems.hpp"
#include "prismfem/quadrature.hpp"
#include "prismfem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace prismfem {

double Rng::uniform(double lo, double hi) {
  double u01 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u01;
}

int Rng::uniform_int(int lo, int hi) {
  auto span = static_cast<unsigned long>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

std::array<Point3, 6> random_prism_vertices(Rng& rng, int index) {
  if (index == 0) {
    return {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0),
            Point3(0, 0, 1), Point3(1, 0, 1), Point3(0, 1, 1)};
  }
  for (;;) {
    Point3 a(rng.uniform(0, 1), rng.uniform(0, 1), 0);
    Point3 b(rng.uniform(0, 1), rng.uniform(0, 1), 0);
    Point3 c(rng.uniform(0, 1), rng.uniform(0, 1), 0);
    double cross = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (cross < 0.0) {
      std::swap(b, c);
      cross = -cross;
    }
    double max_edge = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
    if (0.5 * cross < 0.15 * max_edge * max_edge || max_edge < 0.3) continue;

    double scale = rng.uniform(0.5, 1.5);
    double height = rng.uniform(0.4, 1.2) * max_edge;
    Vec3 shift(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    std::array<Point3, 6> v;
    v[0] = scale * a + shift;
    v[1] = scale * b + shift;
    v[2] = scale * c + shift;
    for (int i = 0; i < 3; ++i) v[static_cast<size_t>(i + 3)] = v[static_cast<size_t>(i)] + Vec3(0, 0, scale * height);
    return v;
  }
}

bool VerifyReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const IdentityResult& e) { return e.pass(); });
}

double VerifyReport::worst_residual() const {
  double worst = 0.0;
  for (const IdentityResult& e : entries) worst = std::max(worst, e.max_residual);
  return worst;
}

namespace {

constexpr int kShapeSamples = 10;  // random shape functions per prism

struct Collector {
  std::vector<IdentityResult>* entries;
  std::map<std::string, size_t> index;

  void add(const std::string& name, double residual, double tol) {
    auto it = index.find(name);
    if (it == index.end()) {
      index.emplace(name, entries->size());
      entries->push_back({name, residual, tol});
    } else {
      IdentityResult& e = (*entries)[it->second];
      e.max_residual = std::max(e.max_residual, residual);
    }
  }
};

Point3 random_point_in_prism(Rng& rng, const CellFrame& fr) {
  double u = rng.uniform(0, 1), v = rng.uniform(0, 1);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  double b1 = 1.0 - u - v;
  Point3 base = b1 * fr.vertex[0] + u * fr.vertex[1] + v * fr.vertex[2];
  return {base.x(), base.y(), fr.vertex[0].z() + rng.uniform(0, 1) * fr.height};
}

// Random member of the shape space: quadratic part over an affine-independent
// lambda triple plus the cubic enrichment. Independent of the nodal basis
// formulas.
LambdaPoly random_shape(Rng& rng, bool h2_space) {
  using LP = LambdaPoly;
  std::array<LP, 3> axes = {LP::lam(2), LP::lam(3), LP::lam(0)};
  LambdaPoly poly = LP::constant(rng.uniform(-1, 1));
  for (int i = 0; i < 3; ++i) {
    poly += rng.uniform(-1, 1) * axes[static_cast<size_t>(i)];
    for (int j = i; j < 3; ++j)
      poly += rng.uniform(-1, 1) * (axes[static_cast<size_t>(i)] * axes[static_cast<size_t>(j)]);
  }
  LP cubic = LP::lam(0) * LP::lam(4) * LP::lam(5);
  if (!h2_space) {
    LP pair_sum = LP::lam(1) * LP::lam(2) + LP::lam(2) * LP::lam(3) + LP::lam(3) * LP::lam(1);
    cubic = (5.0 / 12.0) * cubic + LP::lam(0) * pair_sum;
  }
  poly += rng.uniform(-1, 1) * cubic;
  return poly;
}

void check_frame(Collector& col, Rng& rng, const CellFrame& fr) {
  double norm_res = 0.0;
  for (int i = 0; i < 3; ++i)
    norm_res = std::max(norm_res, std::abs(fr.lambda[static_cast<size_t>(i + 1)](fr.vertex[static_cast<size_t>(i)]) - 1.0));
  norm_res = std::max(norm_res, std::abs(fr.lambda[4](fr.centroid[0]) - 1.0));
  norm_res = std::max(norm_res, std::abs(fr.lambda[5](fr.centroid[0]) + 1.0));
  norm_res = std::max(norm_res, std::abs(fr.lambda[0](fr.vertex[3]) - 1.0));
  norm_res = std::max(norm_res, std::abs(fr.lambda[0](fr.vertex[0]) + 1.0));
  col.add("frame.lambda_normalization", norm_res, 1e-12);

  double pu = 0.0;
  for (int s = 0; s < 5; ++s) {
    Point3 x = random_point_in_prism(rng, fr);
    pu = std::max(pu, std::abs(fr.lambda[1](x) + fr.lambda[2](x) + fr.lambda[3](x) - 1.0));
  }
  col.add("frame.partition_of_unity", pu, 1e-12);

  double grad_res = 0.0;
  for (int i = 1; i <= 3; ++i)
    grad_res = std::max(grad_res, std::abs(fr.lambda[static_cast<size_t>(i)].gradient.z()));
  for (int m : {0, 4, 5})
    grad_res = std::max(grad_res, std::hypot(fr.lambda[static_cast<size_t>(m)].gradient.x(),
                                             fr.lambda[static_cast<size_t>(m)].gradient.y()));
  col.add("frame.gradient_structure", grad_res, 1e-12);

  double eq_res = std::max((fr.lambda[0].gradient - fr.lambda[4].gradient).norm(),
                           (fr.lambda[0].gradient - fr.lambda[5].gradient).norm());
  col.add("frame.vertical_gradients_equal", eq_res, 1e-12);

  double orth = 0.0;
  for (int i = 1; i <= 3; ++i)
    orth = std::max(orth, std::abs(fr.lambda[static_cast<size_t>(i)].gradient.dot(fr.lambda[0].gradient)));
  col.add("frame.lambda_orthogonality", orth, 1e-12);

  double xe = 0.0;
  for (int i = 0; i < 3; ++i) {
    auto [j, k] = side_face_pair(i);
    const AffineFn& xi = fr.xi[static_cast<size_t>(i)];
    const AffineFn& eta = fr.eta[static_cast<size_t>(i)];
    xe = std::max({xe, std::abs(xi(fr.vertex[static_cast<size_t>(k)]) - 1.0),
                   std::abs(xi(fr.vertex[static_cast<size_t>(k + 3)]) - 1.0),
                   std::abs(xi(fr.vertex[static_cast<size_t>(j)]) + 1.0),
                   std::abs(xi(fr.vertex[static_cast<size_t>(j + 3)]) + 1.0),
                   std::abs(eta(fr.vertex[static_cast<size_t>(j + 3)]) - 1.0),
                   std::abs(eta(fr.vertex[static_cast<size_t>(k + 3)]) - 1.0),
                   std::abs(eta(fr.vertex[static_cast<size_t>(j)]) + 1.0),
                   std::abs(eta(fr.vertex[static_cast<size_t>(k)]) + 1.0)});
  }
  col.add("frame.xi_eta_vertex_values", xe, 1e-12);
}

void check_element_h1(Collector& col, Rng& rng, const CellFrame& fr) {
  H1Basis basis = build_h1_basis(fr);

  double delta = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      double v = basis.phi[static_cast<size_t>(i)].value(fr, basis.dof_node[static_cast<size_t>(j)]);
      delta = std::max(delta, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  col.add("h1.nodal_delta", delta, 1e-10);

  double pu = 0.0;
  for (int s = 0; s < 5; ++s) {
    Point3 x = random_point_in_prism(rng, fr);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) sum += basis.phi[static_cast<size_t>(i)].value(fr, x);
    pu = std::max(pu, std::abs(sum - 1.0));
  }
  col.add("h1.partition_of_unity", pu, 1e-12);

  double mean_res = 0.0, side_mean = 0.0, side_xi = 0.0, side_eta = 0.0, face_eq = 0.0,
         p1_res = 0.0;
  for (int s = 0; s < kShapeSamples; ++s) {
    LambdaPoly v = random_shape(rng, false);
    auto value_at = [&](const Point3& x) { return v.value(fr, x); };

    // Horizontal mean-value identity.
    for (int face = 3; face <= 4; ++face) {
      QuadRule rule = face_rule(fr, face, 6);
      double integral = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q)
        integral += rule.weights[q] * value_at(rule.points[q]);
      integral /= fr.triangle_area;
      int base = (face == 3) ? 0 : 3;
      double rhs = 0.0;
      for (int i = 0; i < 3; ++i) rhs += value_at(fr.vertex[static_cast<size_t>(base + i)]) / 12.0;
      rhs += 0.75 * value_at(fr.centroid[static_cast<size_t>(face)]);
      mean_res = std::max(mean_res, std::abs(integral - rhs));
    }

    // Side-face identities against the vertex/centroid combinations.
    for (int i = 0; i < 3; ++i) {
      auto [j, k] = side_face_pair(i);
      QuadRule rule = face_rule(fr, i, 6);
      double area = fr.bottom_edge_length[static_cast<size_t>(i)] * fr.height;
      double m0 = 0.0, mxi = 0.0, meta = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        double w = rule.weights[q], vv = value_at(rule.points[q]);
        m0 += w * vv;
        mxi += w * vv * fr.xi[static_cast<size_t>(i)](rule.points[q]);
        meta += w * vv * fr.eta[static_cast<size_t>(i)](rule.points[q]);
      }
      double vj = value_at(fr.vertex[static_cast<size_t>(j)]), vk = value_at(fr.vertex[static_cast<size_t>(k)]);
      double vj3 = value_at(fr.vertex[static_cast<size_t>(j + 3)]), vk3 = value_at(fr.vertex[static_cast<size_t>(k + 3)]);
      double vm = value_at(fr.centroid[static_cast<size_t>(i)]);
      side_mean = std::max(side_mean,
                           std::abs(m0 / area - ((vj + vk + vj3 + vk3) / 12.0 + 2.0 / 3.0 * vm)));
      side_xi = std::max(side_xi, std::abs(mxi / area - (vk + vk3 - vj - vj3) / 12.0));
      side_eta = std::max(side_eta, std::abs(meta / area - (vj3 + vk3 - vj - vk) / 12.0));
    }

    // The defect v - I_F v agrees between bottom and top.
    LambdaPoly i4 = face_interpolant_h1(fr, basis, 3, value_at);
    LambdaPoly i5 = face_interpolant_h1(fr, basis, 4, value_at);
    double z_bot = fr.vertex[0].z(), z_top = fr.vertex[3].z();
    for (int t = 0; t < 4; ++t) {
      Point3 x = random_point_in_prism(rng, fr);
      Point3 bot(x.x(), x.y(), z_bot), top(x.x(), x.y(), z_top);
      double d4 = value_at(bot) - i4.value(fr, bot);
      double d5 = value_at(top) - i5.value(fr, top);
      face_eq = std::max(face_eq, std::abs(d4 - d5));
    }
  }
  col.add("h1.lemma_face_mean", mean_res, 1e-10);
  col.add("h1.lemma_side_mean", side_mean, 1e-10);
  col.add("h1.lemma_side_xi", side_xi, 1e-10);
  col.add("h1.lemma_side_eta", side_eta, 1e-10);
  col.add("h1.lemma_face_interp_equal", face_eq, 1e-10);

  // P1 on a horizontal face is reproduced by the face interpolant.
  AffineFn affine{Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0), rng.uniform(-1, 1)};
  auto affine_fn = [&](const Point3& x) { return affine(x); };
  for (int face = 3; face <= 4; ++face) {
    LambdaPoly interp = face_interpolant_h1(fr, basis, face, affine_fn);
    double z = (face == 3) ? fr.vertex[0].z() : fr.vertex[3].z();
    for (int t = 0; t < 4; ++t) {
      Point3 x = random_point_in_prism(rng, fr);
      Point3 on_face(x.x(), x.y(), z);
      p1_res = std::max(p1_res, std::abs(interp.value(fr, on_face) - affine(on_face)));
    }
  }
  col.add("h1.face_interp_p1_reproduction", p1_res, 1e-11);
}

void check_element_h2(Collector& col, Rng& rng, const CellFrame& fr) {
  H2Basis basis = build_h2_basis(fr);

  double delta = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      const LambdaPoly& shape = basis.psi[static_cast<size_t>(j)];
      double applied;
      if (i < 6) {
        applied = shape.value(fr, basis.vertex_node[static_cast<size_t>(i)]);
      } else {
        Jet2 jet = shape.evaluate(fr, basis.normal_node[static_cast<size_t>(i - 6)], 1);
        applied = basis.normal_direction[static_cast<size_t>(i - 6)].dot(jet.gradient);
      }
      delta = std::max(delta, std::abs(applied - (i == j ? 1.0 : 0.0)));
    }
  col.add("h2.nodal_delta", delta, 1e-10);

  double morley = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      morley = std::max(morley, std::abs(basis.p[static_cast<size_t>(i)].value(fr, fr.vertex[static_cast<size_t>(j)]) -
                                         (i == j ? 1.0 : 0.0)));
      morley = std::max(morley, std::abs(basis.q[static_cast<size_t>(i)].value(fr, fr.vertex[static_cast<size_t>(j)])));
      Jet2 qj = basis.q[static_cast<size_t>(i)].evaluate(fr, fr.edge_midpoint[static_cast<size_t>(j)], 1);
      Jet2 pj = basis.p[static_cast<size_t>(i)].evaluate(fr, fr.edge_midpoint[static_cast<size_t>(j)], 1);
      const Vec3& nj = fr.outward_normal[static_cast<size_t>(j)];
      morley = std::max(morley, std::abs(nj.dot(qj.gradient) - (i == j ? 1.0 : 0.0)));
      morley = std::max(morley, std::abs(nj.dot(pj.gradient)));
    }
  }
  col.add("h2.morley_relations", morley, 1e-10);

  double normal_mean = 0.0, side_tan = 0.0, side_vert = 0.0, face_eq = 0.0, p1_res = 0.0;
  for (int s = 0; s < kShapeSamples; ++s) {
    LambdaPoly v = random_shape(rng, true);
    auto value_at = [&](const Point3& x) { return v.value(fr, x); };
    auto grad_at = [&](const Point3& x) { return v.evaluate(fr, x, 1).gradient; };

    for (int face = 0; face < 5; ++face) {
      QuadRule rule = face_rule(fr, face, 6);
      const Vec3& n = fr.outward_normal[static_cast<size_t>(face)];
      double integral = 0.0, area = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        integral += rule.weights[q] * n.dot(grad_at(rule.points[q]));
        area += rule.weights[q];
      }
      normal_mean = std::max(normal_mean,
                             std::abs(integral / area - n.dot(grad_at(fr.centroid[static_cast<size_t>(face)]))));
    }

    for (int i = 0; i < 3; ++i) {
      auto [j, k] = side_face_pair(i);
      QuadRule rule = face_rule(fr, i, 6);
      const Vec3& t = fr.tangent[static_cast<size_t>(i)];
      double int_t = 0.0, int_z = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        Vec3 g = grad_at(rule.points[q]);
        int_t += rule.weights[q] * t.dot(g);
        int_z += rule.weights[q] * g.z();
      }
      double vj = value_at(fr.vertex[static_cast<size_t>(j)]), vk = value_at(fr.vertex[static_cast<size_t>(k)]);
      double vj3 = value_at(fr.vertex[static_cast<size_t>(j + 3)]), vk3 = value_at(fr.vertex[static_cast<size_t>(k + 3)]);
      side_tan = std::max(side_tan, std::abs(int_t / fr.vertical_edge_length[static_cast<size_t>(j)] -
                                             0.5 * (vk + vk3 - vj - vj3)));
      side_vert = std::max(side_vert, std::abs(int_z / fr.bottom_edge_length[static_cast<size_t>(i)] -
                                               0.5 * (vj3 + vk3 - vj - vk)));
    }

    LambdaPoly j4 = face_interpolant_h2(fr, 3, value_at);
    LambdaPoly j5 = face_interpolant_h2(fr, 4, value_at);
    double z_bot = fr.vertex[0].z(), z_top = fr.vertex[3].z();
    for (int t = 0; t < 4; ++t) {
      Point3 x = random_point_in_prism(rng, fr);
      Point3 bot(x.x(), x.y(), z_bot), top(x.x(), x.y(), z_top);
      double d4 = value_at(bot) - j4.value(fr, bot);
      double d5 = value_at(top) - j5.value(fr, top);
      face_eq = std::max(face_eq, std::abs(d4 - d5));
    }
  }
  col.add("h2.lemma_face_normal_mean", normal_mean, 1e-10);
  col.add("h2.lemma_side_tangent", side_tan, 1e-10);
  col.add("h2.lemma_side_vertical", side_vert, 1e-10);
  col.add("h2.lemma_face_interp_equal", face_eq, 1e-10);

  AffineFn affine{Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0), rng.uniform(-1, 1)};
  auto affine_fn = [&](const Point3& x) { return affine(x); };
  for (int face = 3; face <= 4; ++face) {
    LambdaPoly interp = face_interpolant_h2(fr, face, affine_fn);
    double z = (face == 3) ? fr.vertex[0].z() : fr.vertex[3].z();
    for (int t = 0; t < 4; ++t) {
      Point3 x = random_point_in_prism(rng, fr);
      Point3 on_face(x.x(), x.y(), z);
      p1_res = std::max(p1_res, std::abs(interp.value(fr, on_face) - affine(on_face)));
    }
  }
  col.add("h2.face_interp_p1_reproduction", p1_res, 1e-11);
}

void check_quadrature(Collector& col, const CellFrame& fr, bool reference_sweep) {
  if (reference_sweep) {
    // Monomial exactness sweep on the reference prism against the factorial
    // closed forms.
    auto factorial = [](int n) {
      double f = 1.0;
      for (int i = 2; i <= n; ++i) f *= i;
      return f;
    };
    double sweep = 0.0;
    for (int degree = 1; degree <= 10; ++degree) {
      QuadRule rule = prism_rule(fr, degree);
      for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
          for (int c = 0; a + b + c <= degree; ++c) {
            double approx = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q) {
              const Point3& x = rule.points[q];
              double mono = 1.0;
              for (int e = 0; e < a; ++e) mono *= x.x();
              for (int e = 0; e < b; ++e) mono *= x.y();
              for (int e = 0; e < c; ++e) mono *= x.z();
              approx += rule.weights[q] * mono;
            }
            double exact = factorial(a) * factorial(b) / factorial(a + b + 2) / (c + 1.0);
            sweep = std::max(sweep, std::abs(approx - exact) / std::abs(exact));
          }
    }
    col.add("quad.monomial_exactness_sweep", sweep, 1e-12);
  }

  double wsum = std::abs(prism_rule(fr, 6).sum_weights() - fr.volume);
  wsum = std::max(wsum, std::abs(face_rule(fr, 3, 4).sum_weights() - fr.triangle_area));
  wsum = std::max(wsum, std::abs(face_rule(fr, 4, 4).sum_weights() - fr.triangle_area));
  for (int i = 0; i < 3; ++i) {
    double area = fr.bottom_edge_length[static_cast<size_t>(i)] * fr.height;
    wsum = std::max(wsum, std::abs(face_rule(fr, i, 4).sum_weights() - area));
  }
  col.add("quad.weight_sum_measure", wsum / std::max(1.0, fr.volume), 1e-12);

  double side = 0.0;
  for (int i = 0; i < 3; ++i) {
    QuadRule rule = face_rule(fr, i, 4);
    double area = fr.bottom_edge_length[static_cast<size_t>(i)] * fr.height;
    double ix = 0.0, ie = 0.0, ixe = 0.0, ixx = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double xv = fr.xi[static_cast<size_t>(i)](rule.points[q]);
      double ev = fr.eta[static_cast<size_t>(i)](rule.points[q]);
      ix += rule.weights[q] * xv;
      ie += rule.weights[q] * ev;
      ixe += rule.weights[q] * xv * ev;
      ixx += rule.weights[q] * xv * xv;
    }
    side = std::max({side, std::abs(ix), std::abs(ie), std::abs(ixe), std::abs(ixx - area / 3.0)});
  }
  col.add("quad.side_face_xi_eta_integrals", side, 1e-12);
}

// Per-cell shape polynomials with global coefficients applied.
std::vector<LambdaPoly> combined_cell_polys(const PrismMesh& mesh,
                                            const std::vector<CellFrame>& frames,
                                            const DofMap& dofs, const Eigen::VectorXd& w) {
  std::vector<LambdaPoly> out(mesh.cells.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
    auto coeffs = gather_local_coeffs(mesh, dofs, w, c);
    LambdaPoly poly;
    if (dofs.kind == ElementKind::H1) {
      H1Basis basis = build_h1_basis(frames[static_cast<size_t>(c)]);
      for (int i = 0; i < 11; ++i) poly += coeffs[static_cast<size_t>(i)] * basis.phi[static_cast<size_t>(i)];
    } else {
      H2Basis basis = build_h2_basis(frames[static_cast<size_t>(c)]);
      for (int i = 0; i < 11; ++i) poly += coeffs[static_cast<size_t>(i)] * basis.psi[static_cast<size_t>(i)];
    }
    out[static_cast<size_t>(c)] = std::move(poly);
  }
  return out;
}

int local_face_of(const PrismCell& cell, int face_id) {
  for (int s = 0; s < 5; ++s)
    if (cell.face_ids[static_cast<size_t>(s)] == face_id) return s;
  return -1;
}

void check_assembly(Collector& col, Rng& rng, int trials) {
  // Local-matrix oracle on random prisms.
  double dev_h1 = 0.0, dev_h2 = 0.0;
  int oracle_trials = std::min(trials, 20);
  for (int t = 0; t < oracle_trials; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
      auto production = local_matrix(fr, kind);
      auto oracle = local_matrix_oracle(fr, kind);
      double scale = production.cwiseAbs().maxCoeff();
      double dev = (production - oracle).cwiseAbs().maxCoeff() / scale;
      (kind == ElementKind::H1 ? dev_h1 : dev_h2) = std::max(
          kind == ElementKind::H1 ? dev_h1 : dev_h2, dev);
    }
  }
  col.add("assembly.local_oracle_h1", dev_h1, 1e-8);
  col.add("assembly.local_oracle_h2", dev_h2, 1e-6);

  // SPD and exact symmetry of the reduced matrices on a small mesh.
  {
    PrismMesh mesh = build_structured_mesh(2, MeshPattern::Trapezoid, 0.2);
    auto frames = compute_all_frames(mesh);
    auto zero = [](const Point3&) { return 0.0; };
    double spd = 0.0, sym = 0.0;
    for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
      SparseSystem system = assemble(mesh, frames, kind, zero);
      Eigen::SparseMatrix<double> diff =
          Eigen::SparseMatrix<double>(system.matrix.transpose()) - system.matrix;
      for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
          sym = std::max(sym, std::abs(it.value()));
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.matrix);
      if (llt.info() != Eigen::Success) spd = 1.0;
    }
    col.add("assembly.matrix_exact_symmetry", sym, 0.0);
    col.add("assembly.spd_cholesky_n2", spd, 0.5);
  }

  // Weak continuity of assembled functions across interior faces at n = 4.
  PrismMesh mesh = build_structured_mesh(4, MeshPattern::Trapezoid, 0.2);
  auto frames = compute_all_frames(mesh);
  int vector_trials = std::min(trials, 10);

  for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
    DofMap dofs = build_dof_map(mesh, kind);
    double side_res = 0.0, horizontal_res = 0.0;
    for (int t = 0; t < vector_trials; ++t) {
      Eigen::VectorXd w(dofs.n_free);
      for (int i = 0; i < dofs.n_free; ++i) w[i] = rng.uniform(-1, 1);
      auto polys = combined_cell_polys(mesh, frames, dofs, w);

      for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& face = mesh.faces[f];
        if (face.is_boundary) continue;
        int c1 = face.cells[0], c2 = face.cells[1];
        const CellFrame& fr1 = frames[static_cast<size_t>(c1)];
        const CellFrame& fr2 = frames[static_cast<size_t>(c2)];
        int s1 = local_face_of(mesh.cells[static_cast<size_t>(c1)], static_cast<int>(f));
        const LambdaPoly& p1 = polys[static_cast<size_t>(c1)];
        const LambdaPoly& p2 = polys[static_cast<size_t>(c2)];

        if (face.kind == FaceKind::SideQuad) {
          QuadRule rule = face_rule(fr1, s1, 6);
          if (kind == ElementKind::H1) {
            double j0 = 0.0, jxi = 0.0, jeta = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q) {
              double jump = p1.value(fr1, rule.points[q]) - p2.value(fr2, rule.points[q]);
              jump *= rule.weights[q];
              j0 += jump;
              jxi += jump * fr1.xi[static_cast<size_t>(s1)](rule.points[q]);
              jeta += jump * fr1.eta[static_cast<size_t>(s1)](rule.points[q]);
            }
            side_res = std::max({side_res, std::abs(j0), std::abs(jxi), std::abs(jeta)});
          } else {
            Vec3 jump = Vec3::Zero();
            for (size_t q = 0; q < rule.points.size(); ++q)
              jump += rule.weights[q] * (p1.evaluate(fr1, rule.points[q], 1).gradient -
                                         p2.evaluate(fr2, rule.points[q], 1).gradient);
            side_res = std::max(side_res, jump.cwiseAbs().maxCoeff());
          }
        } else {
          for (int vtx : face.vertex_ids) {
            const Point3& x = mesh.vertices[static_cast<size_t>(vtx)];
            horizontal_res = std::max(horizontal_res,
                                      std::abs(p1.value(fr1, x) - p2.value(fr2, x)));
          }
          if (kind == ElementKind::H1) {
            horizontal_res = std::max(horizontal_res, std::abs(p1.value(fr1, face.centroid) -
                                                               p2.value(fr2, face.centroid)));
          } else {
            QuadRule rule = face_rule(fr1, s1, 6);
            double jump_n = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q)
              jump_n += rule.weights[q] *
                        face.global_normal.dot(p1.evaluate(fr1, rule.points[q], 1).gradient -
                                               p2.evaluate(fr2, rule.points[q], 1).gradient);
            horizontal_res = std::max(horizontal_res, std::abs(jump_n));
          }
        }
      }
    }
    const char* side_name = (kind == ElementKind::H1) ? "assembly.weak_continuity_side_h1"
                                                      : "assembly.weak_continuity_side_h2";
    const char* horiz_name = (kind == ElementKind::H1) ? "assembly.weak_continuity_horizontal_h1"
                                                       : "assembly.weak_continuity_horizontal_h2";
    col.add(side_name, side_res, 1e-9);
    col.add(horiz_name, horizontal_res, 1e-9);
  }
}

} // namespace

VerifyReport verify_identities(unsigned long seed, int trials) {
  if (trials < 1) trials = 1;
  VerifyReport report;
  report.seed = seed;
  report.trials = trials;
  Collector col{&report.entries, {}};

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    check_frame(col, rng, fr);
    check_element_h1(col, rng, fr);
    check_element_h2(col, rng, fr);
    check_quadrature(col, fr, t == 0);
  }
  check_assembly(col, rng, trials);
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  os << "verification report (seed " << report.seed << ", trials " << report.trials << ")\n";
  char line[160];
  for (const IdentityResult& e : report.entries) {
    std::snprintf(line, sizeof(line), "%-42s max residual %.6e  tolerance %.1e  %s\n",
                  e.name.c_str(), e.max_residual, e.tolerance, e.pass() ? "PASS" : "FAIL");
    os << line;
  }
  os << (report.all_pass() ? "all identities PASS" : "some identities FAIL") << "\n";
  return os.str();
}

} // namespace prismfem
