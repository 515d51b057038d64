#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "prismfem/geometry.hpp"

namespace prismfem {

enum class FaceKind { SideQuad, HorizontalTri };

/// One triangular prism. Vertices are ordered V1 V2 V3 (bottom triangle,
/// counterclockwise seen from +x3) then V4 V5 V6 with V(i+3) vertically
/// above Vi. Faces are F1 = V2V3V6V5, F2 = V3V1V4V6, F3 = V1V2V5V4 (side
/// quads, Fi opposite Vi), F4 = bottom triangle, F5 = top triangle.
struct PrismCell {
  std::array<int, 6> vertex_ids{};
  std::array<int, 5> face_ids{};
};

struct Face {
  FaceKind kind = FaceKind::SideQuad;
  std::vector<int> vertex_ids;           // 4 for side quads, 3 for triangles
  Point3 centroid = Point3::Zero();      // vertex average (faces are parallelograms/triangles)
  Vec3 global_normal = Vec3::Zero();     // canonical unit normal, see below
  std::array<int, 2> cells{-1, -1};
  bool is_boundary = false;

  int n_cells() const { return (cells[1] >= 0) ? 2 : (cells[0] >= 0 ? 1 : 0); }
};

enum class MeshPattern { Trapezoid, Uniform };

struct PrismMesh {
  std::vector<Point3> vertices;
  std::vector<PrismCell> cells;
  std::vector<Face> faces;
  std::vector<bool> vertex_on_boundary;

  // Set for generated meshes (0 when the mesh was assembled by hand).
  int structured_n = 0;
  MeshPattern pattern = MeshPattern::Trapezoid;
  double theta = 0.0;
};

/// Structured prism mesh of the unit cube: an n x n trapezoidal (or uniform)
/// quad partition of [0,1]^2, each quad split along its lower-left to
/// upper-right diagonal, extruded into n layers. Interior grid rows are
/// shifted by (-1)^i * theta / n so columns alternate; boundary rows stay
/// flat. Throws std::invalid_argument for odd/non-positive n or theta
/// outside [0, 0.5).
PrismMesh build_structured_mesh(int n, MeshPattern pattern = MeshPattern::Trapezoid,
                                double theta = 0.2);

/// Checks every cell and face invariant to 1e-12 and returns one message per
/// violation (empty report means the mesh is valid). Violations are data,
/// not errors: the mesh is left untouched.
std::vector<std::string> validate_mesh(const PrismMesh& mesh);

/// Plain-text dump: one `v x1 x2 x3` line per vertex, then one
/// `p i1 i2 i3 i4 i5 i6` line per cell (0-based vertex ids).
void write_mesh_dump(const PrismMesh& mesh, std::ostream& os);

/// Canonical global normal for a face normal candidate: side quads keep the
/// representative with lexicographically positive (x1, x2) components
/// (positive x2 breaking the x1 = 0 tie); horizontal faces use +e3.
Vec3 canonical_normal(FaceKind kind, const Vec3& normal);

} // namespace prismfem
