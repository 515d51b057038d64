#include "prismfem/assembly.hpp"

#include "prismfem/quadrature.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace prismfem {

namespace {

double hess_inner(const Jet2& a, const Jet2& b) {
  return a.hess[0] * b.hess[0] + a.hess[1] * b.hess[1] + a.hess[2] * b.hess[2] +
         2.0 * (a.hess[3] * b.hess[3] + a.hess[4] * b.hess[4] + a.hess[5] * b.hess[5]);
}

std::array<LambdaPoly, 11> shape_functions(const CellFrame& frame, ElementKind kind) {
  if (kind == ElementKind::H1) return build_h1_basis(frame).phi;
  return build_h2_basis(frame).psi;
}

// Value-only finite differences; independent of the analytic chain rule.
// Gradients use a smaller step than Hessians: the cubic truncation term
// hurts first differences, roundoff hurts second ones.
Jet2 fd_jet(const LambdaPoly& poly, const CellFrame& frame, const Point3& x, double grad_step,
            double hess_step) {
  auto val = [&](double dx, double dy, double dz) {
    return poly.value(frame, Point3(x.x() + dx, x.y() + dy, x.z() + dz));
  };
  Jet2 jet;
  jet.value = val(0, 0, 0);
  double h2 = hess_step * hess_step;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e[d] = grad_step;
    jet.gradient[d] = (val(e.x(), e.y(), e.z()) - val(-e.x(), -e.y(), -e.z())) / (2.0 * grad_step);
    e[d] = hess_step;
    double fp = val(e.x(), e.y(), e.z());
    double fm = val(-e.x(), -e.y(), -e.z());
    jet.hess[static_cast<size_t>(d)] = (fp - 2.0 * jet.value + fm) / h2;
  }
  auto mixed = [&](int a, int b) {
    Vec3 ea = Vec3::Zero(), eb = Vec3::Zero();
    ea[a] = hess_step;
    eb[b] = hess_step;
    double pp = val(ea.x() + eb.x(), ea.y() + eb.y(), ea.z() + eb.z());
    double pm = val(ea.x() - eb.x(), ea.y() - eb.y(), ea.z() - eb.z());
    double mp = val(-ea.x() + eb.x(), -ea.y() + eb.y(), -ea.z() + eb.z());
    double mm = val(-ea.x() - eb.x(), -ea.y() - eb.y(), -ea.z() - eb.z());
    return (pp - pm - mp + mm) / (4.0 * h2);
  };
  jet.hess[3] = mixed(0, 1);
  jet.hess[4] = mixed(0, 2);
  jet.hess[5] = mixed(1, 2);
  return jet;
}

Eigen::Matrix<double, 11, 11> local_matrix_impl(const CellFrame& frame, ElementKind kind,
                                                int quad_degree, bool finite_difference) {
  auto shapes = shape_functions(frame, kind);
  QuadRule rule = prism_rule(frame, quad_degree);
  int order = (kind == ElementKind::H1) ? 1 : 2;
  double cell_scale = std::min({frame.height, frame.bottom_edge_length[0],
                                frame.bottom_edge_length[1], frame.bottom_edge_length[2]});
  double grad_step = 1e-5 * cell_scale;
  double hess_step = 1e-4 * cell_scale;

  Eigen::Matrix<double, 11, 11> mat = Eigen::Matrix<double, 11, 11>::Zero();
  std::array<Jet2, 11> jets;
  for (size_t q = 0; q < rule.points.size(); ++q) {
    for (int i = 0; i < 11; ++i)
      jets[static_cast<size_t>(i)] =
          finite_difference
              ? fd_jet(shapes[static_cast<size_t>(i)], frame, rule.points[q], grad_step, hess_step)
              : shapes[static_cast<size_t>(i)].evaluate(frame, rule.points[q], order);
    double w = rule.weights[q];
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = (order == 1)
                       ? jets[static_cast<size_t>(i)].gradient.dot(jets[static_cast<size_t>(j)].gradient)
                       : hess_inner(jets[static_cast<size_t>(i)], jets[static_cast<size_t>(j)]);
        mat(i, j) += w * v;
      }
  }
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) mat(i, j) = mat(j, i);
  return mat;
}

} // namespace

int DofMap::free_index(const PrismCell& cell, int i) const {
  if (i < 6) return vertex_free_index[static_cast<size_t>(cell.vertex_ids[static_cast<size_t>(i)])];
  return face_free_index[static_cast<size_t>(cell.face_ids[static_cast<size_t>(i - 6)])];
}

double DofMap::sign(int cell_id, int i) const {
  if (kind == ElementKind::H1 || i < 6) return 1.0;
  return static_cast<double>(cell_face_sign[static_cast<size_t>(cell_id)][static_cast<size_t>(i - 6)]);
}

DofMap build_dof_map(const PrismMesh& mesh, ElementKind kind) {
  DofMap map;
  map.kind = kind;
  map.n_vertices = static_cast<int>(mesh.vertices.size());
  map.n_faces = static_cast<int>(mesh.faces.size());

  map.vertex_free_index.assign(mesh.vertices.size(), -1);
  map.face_free_index.assign(mesh.faces.size(), -1);
  int next = 0;
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    if (!mesh.vertex_on_boundary[v]) map.vertex_free_index[v] = next++;
  for (size_t f = 0; f < mesh.faces.size(); ++f)
    if (!mesh.faces[f].is_boundary) map.face_free_index[f] = next++;
  map.n_free = next;

  map.cell_face_sign.assign(mesh.cells.size(), {1, 1, 1, 1, 1});
  if (kind == ElementKind::H2) {
    for (size_t c = 0; c < mesh.cells.size(); ++c) {
      CellFrame frame = compute_frame(mesh, static_cast<int>(c));
      for (int s = 0; s < 5; ++s) {
        const Face& face = mesh.faces[static_cast<size_t>(mesh.cells[c].face_ids[static_cast<size_t>(s)])];
        double d = frame.outward_normal[static_cast<size_t>(s)].dot(face.global_normal);
        if (std::abs(std::abs(d) - 1.0) > 1e-9)
          throw std::runtime_error("build_dof_map: face normal not aligned with cell " +
                                   std::to_string(c));
        map.cell_face_sign[c][static_cast<size_t>(s)] = (d > 0.0) ? 1 : -1;
      }
    }
  }
  return map;
}

Eigen::Matrix<double, 11, 11> local_matrix(const CellFrame& frame, ElementKind kind,
                                           int quad_degree) {
  return local_matrix_impl(frame, kind, quad_degree, false);
}

Eigen::Matrix<double, 11, 11> local_matrix_oracle(const CellFrame& frame, ElementKind kind,
                                                  int quad_degree) {
  return local_matrix_impl(frame, kind, quad_degree, true);
}

SparseSystem assemble(const PrismMesh& mesh, const std::vector<CellFrame>& frames,
                      ElementKind kind, const std::function<double(const Point3&)>& source,
                      const AssemblyOptions& options) {
  SparseSystem system;
  system.dofs = build_dof_map(mesh, kind);
  const DofMap& dofs = system.dofs;

  std::vector<Eigen::Triplet<double>> lower;
  lower.reserve(mesh.cells.size() * 66);
  system.rhs = Eigen::VectorXd::Zero(dofs.n_free);

  std::array<int, 11> g{};
  std::array<double, 11> s{};
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    const CellFrame& frame = frames[c];
    const PrismCell& cell = mesh.cells[c];
    auto local = local_matrix(frame, kind, options.quad_stiffness);

    for (int i = 0; i < 11; ++i) {
      g[static_cast<size_t>(i)] = dofs.free_index(cell, i);
      s[static_cast<size_t>(i)] = dofs.sign(static_cast<int>(c), i);
    }
    for (int i = 0; i < 11; ++i) {
      if (g[static_cast<size_t>(i)] < 0) continue;
      for (int j = 0; j < 11; ++j) {
        if (g[static_cast<size_t>(j)] < 0) continue;
        if (g[static_cast<size_t>(i)] < g[static_cast<size_t>(j)]) continue;
        lower.emplace_back(g[static_cast<size_t>(i)], g[static_cast<size_t>(j)],
                           s[static_cast<size_t>(i)] * s[static_cast<size_t>(j)] * local(i, j));
      }
    }

    auto shapes = shape_functions(frame, kind);
    QuadRule rule = prism_rule(frame, options.quad_load);
    std::array<double, 11> load{};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double wf = rule.weights[q] * source(rule.points[q]);
      if (wf == 0.0) continue;
      for (int i = 0; i < 11; ++i)
        load[static_cast<size_t>(i)] += wf * shapes[static_cast<size_t>(i)].value(frame, rule.points[q]);
    }
    for (int i = 0; i < 11; ++i)
      if (g[static_cast<size_t>(i)] >= 0)
        system.rhs[g[static_cast<size_t>(i)]] += s[static_cast<size_t>(i)] * load[static_cast<size_t>(i)];
  }

  Eigen::SparseMatrix<double> lower_matrix(dofs.n_free, dofs.n_free);
  lower_matrix.setFromTriplets(lower.begin(), lower.end());
  system.matrix = lower_matrix.selfadjointView<Eigen::Lower>();
  return system;
}

void dump_matrix(const SparseSystem& system, std::ostream& os) {
  std::ostringstream buf;
  buf.precision(17);
  const auto& m = system.matrix;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      buf << it.row() << " " << it.col() << " " << it.value() << "\n";
  os << buf.str();
}

} // namespace prismfem
