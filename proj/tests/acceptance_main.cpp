// Acceptance suite: one pass/fail line per criterion, exit code 0 only if
// every criterion holds at its stated tolerance.

#include <Eigen/SparseCholesky>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <string>
#include <vector>

#include "prismfem/assembly.hpp"
#include "prismfem/element_h1.hpp"
#include "prismfem/element_h2.hpp"
#include "prismfem/problems.hpp"
#include "prismfem/quadrature.hpp"
#include "prismfem/solver.hpp"
#include "prismfem/study.hpp"
#include "prismfem/verify.hpp"
#include "support.hpp"

using namespace prismfem;
using namespace prismfem::testing;

namespace {

struct Criterion {
  int id;
  bool pass;
  std::string detail;
};

std::vector<Criterion> results;

void record(int id, bool pass, const std::string& detail) {
  results.push_back({id, pass, detail});
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// 1. Unisolvency: both 11x11 DoF matrices equal identity to 1e-10 on 100
//    random shape-regular prisms, under 5 seconds.
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H1Basis h1 = build_h1_basis(fr);
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) {
        double v = h1.phi[static_cast<size_t>(j)].value(fr, h1.dof_node[static_cast<size_t>(i)]);
        worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
      }
    H2Basis h2 = build_h2_basis(fr);
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) {
        double applied;
        if (i < 6) {
          applied = h2.psi[static_cast<size_t>(j)].value(fr, h2.vertex_node[static_cast<size_t>(i)]);
        } else {
          Jet2 jet = h2.psi[static_cast<size_t>(j)].evaluate(fr, h2.normal_node[static_cast<size_t>(i - 6)], 1);
          applied = h2.normal_direction[static_cast<size_t>(i - 6)].dot(jet.gradient);
        }
        worst = std::max(worst, std::abs(applied - (i == j ? 1.0 : 0.0)));
      }
  }
  double elapsed = seconds_since(t0);
  record(1, worst <= 1e-10 && elapsed < 5.0,
         fmt("unisolvency of both elements: max |DoF matrix - I| = %.3e (tol 1e-10), %.2f s",
             worst, elapsed));
}

// 2. Lemma suite over 100 random prisms x 10 random shape functions.
void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport report = verify_identities(1002, 100);
  double worst = 0.0;
  bool found_all = true;
  const char* lemma_entries[] = {
      "h1.lemma_face_interp_equal", "h1.lemma_face_mean",   "h1.lemma_side_mean",
      "h1.lemma_side_xi",           "h1.lemma_side_eta",    "h2.lemma_face_interp_equal",
      "h2.lemma_face_normal_mean",  "h2.lemma_side_tangent", "h2.lemma_side_vertical"};
  for (const char* name : lemma_entries) {
    bool found = false;
    for (const IdentityResult& e : report.entries)
      if (e.name == name) {
        worst = std::max(worst, e.max_residual);
        found = true;
      }
    found_all = found_all && found;
  }
  double elapsed = seconds_since(t0);
  record(2, found_all && worst <= 1e-9 && elapsed < 30.0,
         fmt("face/side lemma identities: max residual = %.3e (tol 1e-9), %.2f s", worst, elapsed));
}

// 3. Both interpolation operators reproduce random quadratics.
void criterion_3() {
  Rng rng(1003);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    H1Basis h1 = build_h1_basis(fr);
    H2Basis h2 = build_h2_basis(fr);
    XPoly v = random_xpoly(rng, 2);
    auto c1 = h1_interpolate(h1, [&](const Point3& x) { return v.value(x); });
    auto c2 = h2_interpolate(
        h2, [&](const Point3& x) { return v.value(x); },
        [&](const Point3& x) { return v.grad(x); });
    for (int s = 0; s < 50; ++s) {
      Point3 x = random_point_in(rng, fr);
      double exact = v.value(x);
      double scale = std::max(1.0, std::abs(exact));
      double i1 = 0.0, i2 = 0.0;
      for (int i = 0; i < 11; ++i) {
        i1 += c1[static_cast<size_t>(i)] * h1.phi[static_cast<size_t>(i)].value(fr, x);
        i2 += c2[static_cast<size_t>(i)] * h2.psi[static_cast<size_t>(i)].value(fr, x);
      }
      worst = std::max({worst, std::abs(i1 - exact) / scale, std::abs(i2 - exact) / scale});
    }
  }
  record(3, worst <= 1e-11,
         fmt("P2 reproduction by both interpolants: max relative defect = %.3e (tol 1e-11)", worst));
}

struct TableRow {
  double h2, h1, l2;
};

// 4. Poisson convergence on the trapezoid mesh, levels 4..32.
void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  StudyConfig config;
  config.element = ElementKind::H1;
  config.problem = Problem::Poisson;
  config.levels = {4, 8, 16, 32};
  StudyResult result = run_study(config);

  const std::vector<TableRow> published = {
      {0, 4.035e2, 1.312e1}, {0, 2.272e2, 4.394e0}, {0, 7.840e1, 7.557e-1}, {0, 2.142e1, 9.250e-2}};

  bool pass = result.all_solved();
  std::string detail;
  if (pass) {
    auto h1_orders = result.orders_h1();
    auto l2_orders = result.orders_l2();
    double h1_final = h1_orders.back(), l2_final = l2_orders.back();
    double worst_ratio = 1.0;
    for (size_t r = 0; r < result.rows.size(); ++r) {
      double rh1 = result.rows[r].errors.h1 / published[r].h1;
      double rl2 = result.rows[r].errors.l2 / published[r].l2;
      for (double ratio : {rh1, rl2})
        worst_ratio = std::max({worst_ratio, ratio, 1.0 / ratio});
    }
    double elapsed = seconds_since(t0);
    pass = h1_final >= 1.75 && l2_final >= 2.8 && worst_ratio <= 2.0 && elapsed <= 600.0;
    detail = fmt("poisson orders at 16->32: H1h %.2f (>=1.75), L2 %.2f (>=2.8); "
                 "worst error ratio vs published %.2f (<=2); %.0f s",
                 h1_final, l2_final, worst_ratio, elapsed);
  } else {
    detail = "poisson study failed to solve all levels";
  }
  record(4, pass, detail);
}

// 5. Biharmonic convergence, levels 4..16 (n=32 opt-in via environment).
void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  StudyConfig config;
  config.element = ElementKind::H2;
  config.problem = Problem::Biharmonic;
  config.levels = {4, 8, 16};
  bool extended = std::getenv("PRISMFEM_ACCEPTANCE_BIHARMONIC_32") != nullptr;
  if (extended) config.levels.push_back(32);
  StudyResult result = run_study(config);

  const std::vector<TableRow> published = {{5.780e1, 4.523e0, 9.524e-1},
                                           {3.254e1, 1.664e0, 3.346e-1},
                                           {1.693e1, 4.692e-1, 9.242e-2},
                                           {8.568e0, 1.216e-1, 2.377e-2}};

  bool pass = result.all_solved();
  std::string detail;
  if (pass) {
    auto h2_orders = result.orders_h2();
    auto h1_orders = result.orders_h1();
    auto l2_orders = result.orders_l2();
    double h2_at_16 = h2_orders[1];
    double worst_ratio = 1.0;
    for (size_t r = 0; r < result.rows.size(); ++r) {
      for (double ratio : {result.rows[r].errors.h2 / published[r].h2,
                           result.rows[r].errors.h1 / published[r].h1,
                           result.rows[r].errors.l2 / published[r].l2})
        worst_ratio = std::max({worst_ratio, ratio, 1.0 / ratio});
    }
    double elapsed = seconds_since(t0);
    pass = h2_at_16 >= 0.85 && h1_orders[1] >= 1.7 && l2_orders[1] >= 1.7 && worst_ratio <= 2.0 &&
           elapsed <= 600.0;
    detail = fmt("biharmonic orders at 8->16: H2h %.2f (>=0.85), H1h %.2f, L2 %.2f (>=1.7); "
                 "worst error ratio vs published %.2f (<=2); %.0f s",
                 h2_at_16, h1_orders[1], l2_orders[1], worst_ratio, elapsed);
    if (extended) {
      double h2_at_32 = h2_orders[2];
      pass = pass && h2_at_32 >= 0.95;
      detail += fmt("; extended n=32 H2h order %.2f (>=0.95)", h2_at_32);
    }
  } else {
    detail = "biharmonic study failed to solve all levels";
  }
  record(5, pass, detail);
}

// 6. Local matrices match the finite-difference oracle; reduced systems are
//    SPD under Cholesky at n in {2,4}.
void criterion_6() {
  Rng rng(1006);
  double dev_h1 = 0.0, dev_h2 = 0.0;
  for (int t = 0; t < 20; ++t) {
    CellFrame fr = make_frame(random_prism_vertices(rng, t));
    for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
      auto production = local_matrix(fr, kind);
      auto oracle = local_matrix_oracle(fr, kind);
      double dev = (production - oracle).cwiseAbs().maxCoeff() / production.cwiseAbs().maxCoeff();
      if (kind == ElementKind::H1)
        dev_h1 = std::max(dev_h1, dev);
      else
        dev_h2 = std::max(dev_h2, dev);
    }
  }

  bool spd = true;
  for (int n : {2, 4}) {
    PrismMesh mesh = build_structured_mesh(n, MeshPattern::Trapezoid, 0.2);
    auto frames = compute_all_frames(mesh);
    for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
      SparseSystem system = assemble(mesh, frames, kind, [](const Point3&) { return 1.0; });
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.matrix);
      spd = spd && llt.info() == Eigen::Success;
    }
  }
  record(6, dev_h1 <= 1e-8 && dev_h2 <= 1e-6 && spd,
         fmt("local matrix vs oracle: H1 %.3e (tol 1e-8), H2 %.3e (tol 1e-6); Cholesky at n=2,4 %s",
             dev_h1, dev_h2, spd ? "succeeded" : "failed"));
}

// 7. Weak continuity of assembled functions across interior faces at n=4.
void criterion_7() {
  PrismMesh mesh = build_structured_mesh(4, MeshPattern::Trapezoid, 0.2);
  auto frames = compute_all_frames(mesh);
  Rng rng(1007);
  double worst = 0.0;

  for (ElementKind kind : {ElementKind::H1, ElementKind::H2}) {
    DofMap dofs = build_dof_map(mesh, kind);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd w(dofs.n_free);
      for (int i = 0; i < dofs.n_free; ++i) w[i] = rng.uniform(-1, 1);

      // Combined per-cell polynomials.
      std::vector<LambdaPoly> polys(mesh.cells.size());
      for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c) {
        auto coeffs = gather_local_coeffs(mesh, dofs, w, c);
        LambdaPoly poly;
        if (kind == ElementKind::H1) {
          H1Basis basis = build_h1_basis(frames[static_cast<size_t>(c)]);
          for (int i = 0; i < 11; ++i) poly += coeffs[static_cast<size_t>(i)] * basis.phi[static_cast<size_t>(i)];
        } else {
          H2Basis basis = build_h2_basis(frames[static_cast<size_t>(c)]);
          for (int i = 0; i < 11; ++i) poly += coeffs[static_cast<size_t>(i)] * basis.psi[static_cast<size_t>(i)];
        }
        polys[static_cast<size_t>(c)] = std::move(poly);
      }

      for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& face = mesh.faces[f];
        if (face.is_boundary || face.kind != FaceKind::SideQuad) continue;
        int c1 = face.cells[0], c2 = face.cells[1];
        const CellFrame& fr1 = frames[static_cast<size_t>(c1)];
        const CellFrame& fr2 = frames[static_cast<size_t>(c2)];
        int s1 = -1;
        for (int s = 0; s < 5; ++s)
          if (mesh.cells[static_cast<size_t>(c1)].face_ids[static_cast<size_t>(s)] == static_cast<int>(f)) s1 = s;
        QuadRule rule = face_rule(fr1, s1, 6);

        if (kind == ElementKind::H1) {
          double j0 = 0.0, jxi = 0.0, jeta = 0.0;
          for (size_t q = 0; q < rule.points.size(); ++q) {
            double jump = rule.weights[q] * (polys[static_cast<size_t>(c1)].value(fr1, rule.points[q]) -
                                             polys[static_cast<size_t>(c2)].value(fr2, rule.points[q]));
            j0 += jump;
            jxi += jump * fr1.xi[static_cast<size_t>(s1)](rule.points[q]);
            jeta += jump * fr1.eta[static_cast<size_t>(s1)](rule.points[q]);
          }
          worst = std::max({worst, std::abs(j0), std::abs(jxi), std::abs(jeta)});
        } else {
          Vec3 jump = Vec3::Zero();
          for (size_t q = 0; q < rule.points.size(); ++q)
            jump += rule.weights[q] *
                    (polys[static_cast<size_t>(c1)].evaluate(fr1, rule.points[q], 1).gradient -
                     polys[static_cast<size_t>(c2)].evaluate(fr2, rule.points[q], 1).gradient);
          worst = std::max(worst, jump.cwiseAbs().maxCoeff());
        }
      }
    }
  }
  record(7, worst <= 1e-9,
         fmt("weak continuity across interior side faces at n=4: max moment = %.3e (tol 1e-9)",
             worst));
}

// 8. Determinism of the verification report and study tables.
void criterion_8() {
  VerifyReport va = verify_identities(42, 100);
  VerifyReport vb = verify_identities(42, 100);
  bool verify_same = format_report(va) == format_report(vb);

  StudyConfig config;
  config.levels = {4, 8};
  std::string ta = format_table(run_study(config), TableFormat::Csv);
  std::string tb = format_table(run_study(config), TableFormat::Csv);
  bool study_same = ta == tb;

  record(8, verify_same && study_same,
         fmt("byte-identical outputs: verify %s, study %s", verify_same ? "yes" : "no",
             study_same ? "yes" : "no"));
}

} // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();

  int failures = 0;
  for (const Criterion& c : results)
    if (!c.pass) ++failures;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
