#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "prismfem/frame.hpp"
#include "prismfem/geometry.hpp"
#include "prismfem/verify.hpp"

namespace prismfem::testing {

inline std::array<Point3, 6> reference_prism_vertices() {
  return {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0),
          Point3(0, 0, 1), Point3(1, 0, 1), Point3(0, 1, 1)};
}

inline CellFrame reference_frame() { return make_frame(reference_prism_vertices()); }

/// Polynomial in the physical coordinates (x1, x2, x3); the independent
/// oracle counterpart of LambdaPoly for tests.
struct XPoly {
  std::map<std::array<int, 3>, double> terms;

  static XPoly affine(const AffineFn& f) {
    XPoly p;
    p.terms[{1, 0, 0}] = f.gradient.x();
    p.terms[{0, 1, 0}] = f.gradient.y();
    p.terms[{0, 0, 1}] = f.gradient.z();
    p.terms[{0, 0, 0}] = f.offset;
    p.prune();
    return p;
  }

  static XPoly monomial(int a, int b, int c, double coeff) {
    XPoly p;
    p.terms[{a, b, c}] = coeff;
    return p;
  }

  void prune() {
    for (auto it = terms.begin(); it != terms.end();)
      it = (it->second == 0.0) ? terms.erase(it) : std::next(it);
  }

  XPoly operator+(const XPoly& o) const {
    XPoly r = *this;
    for (const auto& [e, c] : o.terms) r.terms[e] += c;
    r.prune();
    return r;
  }

  XPoly operator*(double s) const {
    XPoly r = *this;
    for (auto& [e, c] : r.terms) c *= s;
    r.prune();
    return r;
  }

  XPoly operator*(const XPoly& o) const {
    XPoly r;
    for (const auto& [ea, ca] : terms)
      for (const auto& [eb, cb] : o.terms)
        r.terms[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    r.prune();
    return r;
  }

  double value(const Point3& x) const {
    double v = 0.0;
    for (const auto& [e, c] : terms) {
      double m = c;
      for (int i = 0; i < e[0]; ++i) m *= x.x();
      for (int i = 0; i < e[1]; ++i) m *= x.y();
      for (int i = 0; i < e[2]; ++i) m *= x.z();
      v += m;
    }
    return v;
  }

  Vec3 grad(const Point3& x) const {
    Vec3 g = Vec3::Zero();
    for (const auto& [e, c] : terms)
      for (int d = 0; d < 3; ++d) {
        if (e[static_cast<size_t>(d)] == 0) continue;
        double m = c * e[static_cast<size_t>(d)];
        std::array<int, 3> r = e;
        r[static_cast<size_t>(d)] -= 1;
        for (int i = 0; i < r[0]; ++i) m *= x.x();
        for (int i = 0; i < r[1]; ++i) m *= x.y();
        for (int i = 0; i < r[2]; ++i) m *= x.z();
        g[d] += m;
      }
    return g;
  }

  /// Exact integral over the reference prism (unit right triangle x [0,1]).
  double integral_reference_prism() const {
    auto factorial = [](int n) {
      double f = 1.0;
      for (int i = 2; i <= n; ++i) f *= i;
      return f;
    };
    double v = 0.0;
    for (const auto& [e, c] : terms)
      v += c * factorial(e[0]) * factorial(e[1]) / factorial(e[0] + e[1] + 2) / (e[2] + 1.0);
    return v;
  }
};

inline XPoly random_xpoly(Rng& rng, int degree) {
  XPoly p;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c) p.terms[{a, b, c}] = rng.uniform(-1, 1);
  return p;
}

inline Point3 random_point_in(Rng& rng, const CellFrame& fr) {
  double u = rng.uniform(0, 1), v = rng.uniform(0, 1);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  Point3 base = (1.0 - u - v) * fr.vertex[0] + u * fr.vertex[1] + v * fr.vertex[2];
  return {base.x(), base.y(), fr.vertex[0].z() + rng.uniform(0, 1) * fr.height};
}

} // namespace prismfem::testing
