#include "prismfem/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace prismfem {

namespace {

struct TriPoint {
  double l1, l2, l3, w; // barycentric coordinates, weights summing to 1
};

void push_orbit3(std::vector<TriPoint>& pts, double a, double b, double w) {
  pts.push_back({a, b, b, w});
  pts.push_back({b, a, b, w});
  pts.push_back({b, b, a, w});
}

void push_orbit6(std::vector<TriPoint>& pts, double a, double b, double w) {
  double c = 1.0 - a - b;
  pts.push_back({a, b, c, w});
  pts.push_back({a, c, b, w});
  pts.push_back({b, a, c, w});
  pts.push_back({b, c, a, w});
  pts.push_back({c, a, b, w});
  pts.push_back({c, b, a, w});
}

// Conical-product rule: exact to the requested degree, positive weights.
std::vector<TriPoint> duffy_rule(int degree) {
  std::vector<double> un, uw, vn, vw;
  gauss_legendre_01((degree + 3) / 2, un, uw); // the map adds one u-degree
  gauss_legendre_01((degree + 2) / 2, vn, vw);
  std::vector<TriPoint> pts;
  pts.reserve(un.size() * vn.size());
  for (size_t i = 0; i < un.size(); ++i)
    for (size_t j = 0; j < vn.size(); ++j) {
      double x = un[i];
      double y = vn[j] * (1.0 - un[i]);
      double w = 2.0 * uw[i] * vw[j] * (1.0 - un[i]);
      pts.push_back({1.0 - x - y, x, y, w});
    }
  return pts;
}

// Symmetric positive rules; degrees with negative-weight classical rules
// (3, 7) fall through to the next table. Constants checked by the monomial
// exactness sweep in the tests.
std::vector<TriPoint> triangle_rule(int degree, int& actual_degree) {
  std::vector<TriPoint> pts;
  switch (degree) {
    case 1:
      actual_degree = 1;
      pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0});
      return pts;
    case 2:
      actual_degree = 2;
      push_orbit3(pts, 2.0 / 3, 1.0 / 6, 1.0 / 3);
      return pts;
    case 3:
    case 4:
      actual_degree = 4;
      push_orbit3(pts, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      push_orbit3(pts, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      return pts;
    case 5: {
      actual_degree = 5;
      double s15 = std::sqrt(15.0);
      pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40});
      push_orbit3(pts, (9.0 + 2.0 * s15) / 21, (6.0 - s15) / 21, (155.0 - s15) / 1200);
      push_orbit3(pts, (9.0 - 2.0 * s15) / 21, (6.0 + s15) / 21, (155.0 + s15) / 1200);
      return pts;
    }
    case 6:
      actual_degree = 6;
      push_orbit3(pts, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      push_orbit3(pts, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      push_orbit6(pts, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      return pts;
    case 7:
    case 8:
      actual_degree = 8;
      pts.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.144315607677787});
      push_orbit3(pts, 0.081414823414554, 0.459292588292723, 0.095091634267285);
      push_orbit3(pts, 0.658861384496480, 0.170569307751760, 0.103217370534718);
      push_orbit3(pts, 0.898905543365938, 0.050547228317031, 0.032458497623198);
      push_orbit6(pts, 0.008394777409958, 0.263112829634638, 0.027230314174435);
      return pts;
    case 9:
    case 10:
      actual_degree = degree;
      return duffy_rule(degree);
    default:
      throw std::invalid_argument("triangle rule: unsupported degree " + std::to_string(degree));
  }
}

void check_degree(int degree) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
}

} // namespace

double QuadRule::sum_weights() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre_01(int npts, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(npts), 0.5);
  weights.assign(static_cast<size_t>(npts), 1.0);
  if (npts == 1) return;

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(npts, npts);
  for (int k = 1; k < npts; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  for (int i = 0; i < npts; ++i) {
    nodes[static_cast<size_t>(i)] = 0.5 * (eig.eigenvalues()[i] + 1.0);
    double v0 = eig.eigenvectors()(0, i);
    weights[static_cast<size_t>(i)] = v0 * v0; // 2 v0^2 on [-1,1], halved for [0,1]
  }
}

QuadRule prism_rule(const CellFrame& frame, int degree) {
  check_degree(degree);
  int tri_degree = 0;
  auto tri = triangle_rule(degree, tri_degree);
  int n1d = (degree + 2) / 2;
  std::vector<double> zn, zw;
  gauss_legendre_01(n1d, zn, zw);

  double z_bot = frame.vertex[0].z();
  QuadRule rule;
  rule.exactness_degree = std::min(tri_degree, 2 * n1d - 1);
  rule.points.reserve(tri.size() * zn.size());
  rule.weights.reserve(tri.size() * zn.size());
  for (const TriPoint& tp : tri) {
    Point3 base = tp.l1 * frame.vertex[0] + tp.l2 * frame.vertex[1] + tp.l3 * frame.vertex[2];
    for (size_t q = 0; q < zn.size(); ++q) {
      rule.points.emplace_back(base.x(), base.y(), z_bot + zn[q] * frame.height);
      rule.weights.push_back(tp.w * frame.triangle_area * zw[q] * frame.height);
    }
  }
  return rule;
}

QuadRule face_rule(const CellFrame& frame, int face, int degree) {
  check_degree(degree);
  if (face < 0 || face > 4) throw std::invalid_argument("face_rule: face index out of range");

  QuadRule rule;
  if (face >= 3) {
    int tri_degree = 0;
    auto tri = triangle_rule(degree, tri_degree);
    rule.exactness_degree = tri_degree;
    int base = (face == 3) ? 0 : 3;
    for (const TriPoint& tp : tri) {
      Point3 p = tp.l1 * frame.vertex[static_cast<size_t>(base)] +
                 tp.l2 * frame.vertex[static_cast<size_t>(base + 1)] +
                 tp.l3 * frame.vertex[static_cast<size_t>(base + 2)];
      rule.points.push_back(p);
      rule.weights.push_back(tp.w * frame.triangle_area);
    }
    return rule;
  }

  // Side quads are parallelograms spanned by the bottom edge and the
  // vertical extrusion, so a tangential Gauss product is exact.
  auto [j, k] = side_face_pair(face);
  const Point3& pj = frame.vertex[static_cast<size_t>(j)];
  Vec3 edge = frame.vertex[static_cast<size_t>(k)] - pj;
  Vec3 up(0, 0, frame.height);
  double area = frame.bottom_edge_length[static_cast<size_t>(face)] * frame.height;

  int n1d = (degree + 2) / 2;
  std::vector<double> sn, sw;
  gauss_legendre_01(n1d, sn, sw);
  rule.exactness_degree = 2 * n1d - 1;
  rule.points.reserve(sn.size() * sn.size());
  rule.weights.reserve(sn.size() * sn.size());
  for (size_t a = 0; a < sn.size(); ++a)
    for (size_t b = 0; b < sn.size(); ++b) {
      rule.points.push_back(pj + sn[a] * edge + sn[b] * up);
      rule.weights.push_back(sw[a] * sw[b] * area);
    }
  return rule;
}

} // namespace prismfem
