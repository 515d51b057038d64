#include "prismfem/frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace prismfem {

CellFrame make_frame(const std::array<Point3, 6>& vertices) {
  CellFrame fr;
  fr.vertex = vertices;

  const Point3& v1 = vertices[0];
  const Point3& v2 = vertices[1];
  const Point3& v3 = vertices[2];

  double cross = (v2.x() - v1.x()) * (v3.y() - v1.y()) - (v2.y() - v1.y()) * (v3.x() - v1.x());
  double scale = std::max({(v2 - v1).norm(), (v3 - v1).norm(), (v3 - v2).norm()});
  if (!(cross > 1e-14 * scale * scale))
    throw std::runtime_error("degenerate prism: bottom triangle area " + std::to_string(0.5 * cross));
  fr.triangle_area = 0.5 * cross;

  double z_bot = v1.z();
  double z_top = vertices[3].z();
  double height = z_top - z_bot;
  if (!(height > 1e-14 * std::max(scale, 1.0)))
    throw std::runtime_error("degenerate prism: height " + std::to_string(height));
  fr.height = height;
  fr.volume = fr.triangle_area * height;

  // Barycentric coordinates of (x1, x2) in the bottom triangle.
  Eigen::Matrix3d system;
  system << v1.x(), v1.y(), 1.0,
            v2.x(), v2.y(), 1.0,
            v3.x(), v3.y(), 1.0;
  Eigen::PartialPivLU<Eigen::Matrix3d> lu(system);
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    rhs[i] = 1.0;
    Eigen::Vector3d abc = lu.solve(rhs);
    fr.lambda[static_cast<size_t>(i + 1)].gradient = Vec3(abc[0], abc[1], 0.0);
    fr.lambda[static_cast<size_t>(i + 1)].offset = abc[2];
  }

  // Vertical linears: lambda_4 = 0 on F4, lambda_5 = 0 on F5, lambda_0 = 0 at
  // mid-height; normalized by lambda_4 = -lambda_5 = 1 at the side centroids
  // and lambda_0(V4) = 1.
  double g3 = 2.0 / height;
  fr.lambda[4] = AffineFn{Vec3(0, 0, g3), -g3 * z_bot};
  fr.lambda[5] = AffineFn{Vec3(0, 0, g3), -g3 * z_top};
  fr.lambda[0] = AffineFn{Vec3(0, 0, g3), -(z_bot + z_top) / height};

  for (int i = 0; i < 3; ++i) {
    auto [j, k] = side_face_pair(i);
    const Point3& pj = vertices[static_cast<size_t>(j)];
    const Point3& pk = vertices[static_cast<size_t>(k)];
    fr.centroid[static_cast<size_t>(i)] =
        0.25 * (pj + pk + vertices[static_cast<size_t>(j + 3)] + vertices[static_cast<size_t>(k + 3)]);
    Vec3 edge = pk - pj;
    double edge_len = edge.norm();
    fr.bottom_edge_length[static_cast<size_t>(i)] = edge_len;
    fr.vertical_edge_length[static_cast<size_t>(i)] =
        (vertices[static_cast<size_t>(i + 3)] - vertices[static_cast<size_t>(i)]).norm();
    fr.tangent[static_cast<size_t>(i)] = edge / edge_len;
    fr.edge_midpoint[static_cast<size_t>(i)] = 0.5 * (pj + pk);

    Vec3 normal(edge.y(), -edge.x(), 0.0);
    normal /= normal.norm();
    if (normal.dot(pj - vertices[static_cast<size_t>(i)]) < 0.0) normal = -normal;
    fr.outward_normal[static_cast<size_t>(i)] = normal;

    // xi_i is -1 on the vertical edge through V_j and +1 on the one through
    // V_k; eta_i is -1 on the bottom edge and +1 on the top edge.
    Vec3 g = 2.0 * edge / (edge_len * edge_len);
    fr.xi[static_cast<size_t>(i)] = AffineFn{g, -1.0 - g.dot(pj)};
    fr.eta[static_cast<size_t>(i)] = fr.lambda[0];
  }

  fr.centroid[3] = (v1 + v2 + v3) / 3.0;
  fr.centroid[4] = (vertices[3] + vertices[4] + vertices[5]) / 3.0;
  fr.outward_normal[3] = Vec3(0, 0, -1);
  fr.outward_normal[4] = Vec3(0, 0, 1);

  return fr;
}

CellFrame compute_frame(const PrismMesh& mesh, int cell_id) {
  const PrismCell& cell = mesh.cells[static_cast<size_t>(cell_id)];
  std::array<Point3, 6> vertices;
  for (int i = 0; i < 6; ++i)
    vertices[static_cast<size_t>(i)] = mesh.vertices[static_cast<size_t>(cell.vertex_ids[static_cast<size_t>(i)])];
  try {
    return make_frame(vertices);
  } catch (const std::runtime_error& err) {
    throw std::runtime_error("cell " + std::to_string(cell_id) + ": " + err.what());
  }
}

std::vector<CellFrame> compute_all_frames(const PrismMesh& mesh) {
  std::vector<CellFrame> frames;
  frames.reserve(mesh.cells.size());
  for (int c = 0; c < static_cast<int>(mesh.cells.size()); ++c)
    frames.push_back(compute_frame(mesh, c));
  return frames;
}

} // namespace prismfem
