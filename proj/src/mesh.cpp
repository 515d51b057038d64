#include "prismfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace prismfem {

namespace {

constexpr double kTol = 1e-12;

// Local face vertex lists in cell-local indices (0-based V1..V6).
constexpr std::array<std::array<int, 4>, 3> kSideFaces = {{
    {1, 2, 5, 4},  // F1 = V2 V3 V6 V5
    {2, 0, 3, 5},  // F2 = V3 V1 V4 V6
    {0, 1, 4, 3},  // F3 = V1 V2 V5 V4
}};

std::vector<int> face_key(const std::vector<int>& ids) {
  std::vector<int> key = ids;
  std::sort(key.begin(), key.end());
  return key;
}

Vec3 face_geometric_normal(const PrismMesh& mesh, const Face& face) {
  const Point3& a = mesh.vertices[static_cast<size_t>(face.vertex_ids[0])];
  const Point3& b = mesh.vertices[static_cast<size_t>(face.vertex_ids[1])];
  const Point3& c = mesh.vertices[static_cast<size_t>(face.vertex_ids[2])];
  Vec3 n = (b - a).cross(c - a);
  double len = n.norm();
  if (len == 0.0) return Vec3::Zero();
  return n / len;
}

} // namespace

Vec3 canonical_normal(FaceKind kind, const Vec3& normal) {
  if (kind == FaceKind::HorizontalTri) return Vec3(0, 0, 1);
  Vec3 n = normal.normalized();
  if (n.x() < -kTol) return -n;
  if (n.x() > kTol) return n;
  return (n.y() >= 0.0) ? n : -n;
}

PrismMesh build_structured_mesh(int n, MeshPattern pattern, double theta) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_structured_mesh: n must be even and >= 2, got " +
                                std::to_string(n));
  if (theta < 0.0 || theta >= 0.5)
    throw std::invalid_argument("build_structured_mesh: theta must lie in [0, 0.5), got " +
                                std::to_string(theta));
  if (pattern == MeshPattern::Uniform) theta = 0.0;

  PrismMesh mesh;
  mesh.structured_n = n;
  mesh.pattern = pattern;
  mesh.theta = theta;

  const int np = n + 1;
  const double h = 1.0 / n;

  // 2D grid: columns alternate the interior rows up/down by theta/n.
  auto grid_y = [&](int i, int j) {
    double y = j * h;
    if (j > 0 && j < n) y += (i % 2 == 0 ? 1.0 : -1.0) * theta * h;
    return y;
  };
  auto v2d = [&](int i, int j) { return j * np + i; };

  mesh.vertices.reserve(static_cast<size_t>(np) * np * np);
  for (int k = 0; k < np; ++k)
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        mesh.vertices.emplace_back(i * h, grid_y(i, j), k * h);

  auto vid = [&](int i2d, int k) { return k * np * np + i2d; };

  // Each quad cell splits along its lower-left to upper-right diagonal;
  // both triangles are counterclockwise seen from +x3.
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<size_t>(2) * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int a = v2d(i, j), b = v2d(i + 1, j), c = v2d(i + 1, j + 1), d = v2d(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});
    }

  mesh.cells.reserve(static_cast<size_t>(2) * n * n * n);
  for (int k = 0; k < n; ++k)
    for (const auto& t : triangles) {
      PrismCell cell;
      cell.vertex_ids = {vid(t[0], k),     vid(t[1], k),     vid(t[2], k),
                         vid(t[0], k + 1), vid(t[1], k + 1), vid(t[2], k + 1)};
      mesh.cells.push_back(cell);
    }

  // Deduplicate faces across cells.
  std::map<std::vector<int>, int> face_index;
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    PrismCell& cell = mesh.cells[c];
    const auto& v = cell.vertex_ids;
    std::array<std::vector<int>, 5> local;
    for (int s = 0; s < 3; ++s)
      local[static_cast<size_t>(s)] = {v[static_cast<size_t>(kSideFaces[static_cast<size_t>(s)][0])],
                                       v[static_cast<size_t>(kSideFaces[static_cast<size_t>(s)][1])],
                                       v[static_cast<size_t>(kSideFaces[static_cast<size_t>(s)][2])],
                                       v[static_cast<size_t>(kSideFaces[static_cast<size_t>(s)][3])]};
    local[3] = {v[0], v[1], v[2]};
    local[4] = {v[3], v[4], v[5]};

    for (int s = 0; s < 5; ++s) {
      auto key = face_key(local[static_cast<size_t>(s)]);
      auto it = face_index.find(key);
      int fid;
      if (it == face_index.end()) {
        fid = static_cast<int>(mesh.faces.size());
        face_index.emplace(std::move(key), fid);
        Face face;
        face.kind = (s < 3) ? FaceKind::SideQuad : FaceKind::HorizontalTri;
        face.vertex_ids = local[static_cast<size_t>(s)];
        face.cells[0] = static_cast<int>(c);
        mesh.faces.push_back(std::move(face));
      } else {
        fid = it->second;
        mesh.faces[static_cast<size_t>(fid)].cells[1] = static_cast<int>(c);
      }
      cell.face_ids[static_cast<size_t>(s)] = fid;
    }
  }

  for (Face& face : mesh.faces) {
    Point3 centroid = Point3::Zero();
    for (int v : face.vertex_ids) centroid += mesh.vertices[static_cast<size_t>(v)];
    face.centroid = centroid / static_cast<double>(face.vertex_ids.size());
    face.global_normal = canonical_normal(face.kind, face_geometric_normal(mesh, face));
    face.is_boundary = face.n_cells() == 1;
  }

  mesh.vertex_on_boundary.assign(mesh.vertices.size(), false);
  for (const Face& face : mesh.faces)
    if (face.is_boundary)
      for (int v : face.vertex_ids) mesh.vertex_on_boundary[static_cast<size_t>(v)] = true;

  return mesh;
}

std::vector<std::string> validate_mesh(const PrismMesh& mesh) {
  std::vector<std::string> report;
  auto fail = [&](const std::string& msg) { report.push_back(msg); };

  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    if (!mesh.vertices[v].allFinite())
      fail("vertex " + std::to_string(v) + ": non-finite coordinates");

  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    const PrismCell& cell = mesh.cells[c];
    const std::string tag = "cell " + std::to_string(c);
    std::array<Point3, 6> p;
    bool bad_ids = false;
    for (int i = 0; i < 6; ++i) {
      int id = cell.vertex_ids[static_cast<size_t>(i)];
      if (id < 0 || id >= static_cast<int>(mesh.vertices.size())) {
        fail(tag + ": vertex id out of range");
        bad_ids = true;
        break;
      }
      p[static_cast<size_t>(i)] = mesh.vertices[static_cast<size_t>(id)];
    }
    if (bad_ids) continue;

    double z_bot = (p[0].z() + p[1].z() + p[2].z()) / 3.0;
    double z_top = (p[3].z() + p[4].z() + p[5].z()) / 3.0;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(p[static_cast<size_t>(i)].z() - z_bot) > kTol)
        fail(tag + ": bottom face F4 not parallel to the x1-x2 plane");
      if (std::abs(p[static_cast<size_t>(i + 3)].z() - z_top) > kTol)
        fail(tag + ": top face F5 not parallel to the x1-x2 plane");
      Vec3 d = p[static_cast<size_t>(i + 3)] - p[static_cast<size_t>(i)];
      if (std::hypot(d.x(), d.y()) > kTol)
        fail(tag + ": vertex V" + std::to_string(i + 4) + " not vertically above V" +
             std::to_string(i + 1));
    }
    if (!(z_top > z_bot + kTol)) fail(tag + ": x3(F5) must exceed x3(F4)");

    Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0];
    double area2 = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(area2 > kTol)) fail(tag + ": bottom triangle degenerate or not counterclockwise");

    for (int s = 0; s < 3; ++s) {
      int fid = cell.face_ids[static_cast<size_t>(s)];
      const auto& loc = kSideFaces[static_cast<size_t>(s)];
      Point3 a = p[static_cast<size_t>(loc[0])], b = p[static_cast<size_t>(loc[1])],
             d2 = p[static_cast<size_t>(loc[2])], e = p[static_cast<size_t>(loc[3])];
      Vec3 nrm = (b - a).cross(d2 - a);
      double len = nrm.norm();
      if (len <= kTol) {
        fail(tag + ", face " + std::to_string(fid) + ": degenerate side quad");
        continue;
      }
      nrm /= len;
      if (std::abs(nrm.z()) > kTol)
        fail(tag + ", face " + std::to_string(fid) + ": side quad not parallel to the x3-axis");
      if (std::abs(nrm.dot(e - a)) > kTol)
        fail(tag + ", face " + std::to_string(fid) + ": side quad not planar");
    }
  }

  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    const std::string tag = "face " + std::to_string(f);
    size_t expect = face.kind == FaceKind::SideQuad ? 4u : 3u;
    if (face.vertex_ids.size() != expect) {
      fail(tag + ": wrong vertex count");
      continue;
    }
    if (std::abs(face.global_normal.norm() - 1.0) > kTol) fail(tag + ": normal not unit");
    Vec3 canon = canonical_normal(face.kind, face_geometric_normal(mesh, face));
    if ((face.global_normal - canon).norm() > 1e-10) fail(tag + ": normal not canonical");
    if (face.is_boundary != (face.n_cells() == 1)) fail(tag + ": boundary flag inconsistent");
    if (face.n_cells() == 0) fail(tag + ": no adjacent cell");
    for (int ci : face.cells) {
      if (ci < 0) continue;
      const auto& fids = mesh.cells[static_cast<size_t>(ci)].face_ids;
      if (std::find(fids.begin(), fids.end(), static_cast<int>(f)) == fids.end())
        fail(tag + ": adjacency not symmetric with cell " + std::to_string(ci));
    }
  }

  // Interior faces must be shared by exactly two cells; count via cell lists.
  std::vector<int> incidence(mesh.faces.size(), 0);
  for (const PrismCell& cell : mesh.cells)
    for (int fid : cell.face_ids)
      if (fid >= 0 && fid < static_cast<int>(mesh.faces.size())) ++incidence[static_cast<size_t>(fid)];
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    if (incidence[f] != mesh.faces[f].n_cells())
      fail("face " + std::to_string(f) + ": adjacency count mismatch");
    if (incidence[f] > 2) fail("face " + std::to_string(f) + ": shared by more than two cells");
    if (!mesh.faces[f].is_boundary && incidence[f] != 2)
      fail("face " + std::to_string(f) + ": interior face not shared by exactly two cells");
  }

  if (mesh.structured_n > 0) {
    long n = mesh.structured_n;
    long expect_vertices = (n + 1) * (n + 1) * (n + 1);
    long expect_prisms = 2 * n * n * n;
    long edges_2d = (n + 1) * (n + 1) + 2 * n * n - 1;
    long expect_side = n * edges_2d;
    long expect_horizontal = 2 * n * n * (n + 1);
    long side = 0, horizontal = 0;
    for (const Face& face : mesh.faces)
      (face.kind == FaceKind::SideQuad ? side : horizontal) += 1;
    if (static_cast<long>(mesh.vertices.size()) != expect_vertices)
      fail("mesh: vertex count does not match the construction formula");
    if (static_cast<long>(mesh.cells.size()) != expect_prisms)
      fail("mesh: prism count does not match 2n^3");
    if (side != expect_side) fail("mesh: side face count does not match n*E2d");
    if (horizontal != expect_horizontal) fail("mesh: horizontal face count does not match 2n^2(n+1)");
  }

  return report;
}

void write_mesh_dump(const PrismMesh& mesh, std::ostream& os) {
  std::ostringstream buf;
  buf.precision(17);
  for (const Point3& v : mesh.vertices)
    buf << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const PrismCell& cell : mesh.cells) {
    buf << "p";
    for (int id : cell.vertex_ids) buf << " " << id;
    buf << "\n";
  }
  os << buf.str();
}

} // namespace prismfem
