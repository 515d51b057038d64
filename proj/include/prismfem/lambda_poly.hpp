#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prismfem/frame.hpp"
#include "prismfem/geometry.hpp"

namespace prismfem {

/// Value, gradient and Hessian of a scalar function at one point. The
/// Hessian is stored as its six independent entries so it is symmetric by
/// construction.
struct Jet2 {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  // Order: xx, yy, zz, xy, xz, yz.
  std::array<double, 6> hess{};

  double h(int i, int j) const {
    if (i == j) return hess[static_cast<size_t>(i)];
    int k = i + j; // 1 -> xy, 2 -> xz, 3 -> yz
    return hess[static_cast<size_t>(2 + k)];
  }

  Eigen::Matrix3d hessian() const {
    Eigen::Matrix3d m;
    m << hess[0], hess[3], hess[4],
         hess[3], hess[1], hess[5],
         hess[4], hess[5], hess[2];
    return m;
  }
};

/// Polynomial in the six cell coordinates lambda_0..lambda_5, stored as a
/// sorted term list (exponent tuple, coefficient) with no duplicates and no
/// zero coefficients.
class LambdaPoly {
public:
  using Exponents = std::array<uint8_t, 6>;
  struct Term {
    Exponents exp{};
    double coeff = 0.0;
  };

  LambdaPoly() = default;
  static LambdaPoly constant(double c);
  static LambdaPoly lam(int m);                     // the single variable lambda_m
  static LambdaPoly monomial(const Exponents& e, double c);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int total_degree() const;

  LambdaPoly& operator+=(const LambdaPoly& other);
  LambdaPoly& operator-=(const LambdaPoly& other);
  LambdaPoly& operator*=(double s);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  friend LambdaPoly operator*(LambdaPoly a, double s) { return a *= s; }
  friend LambdaPoly operator*(double s, LambdaPoly a) { return a *= s; }
  friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b);

  /// Evaluates value (order >= 0), gradient (order >= 1) and Hessian
  /// (order >= 2) at a physical point. The lambda functions are affine, so
  /// the chain rule has constant coefficients and no curvature terms.
  Jet2 evaluate(const CellFrame& frame, const Point3& x, int order = 2) const;

  double value(const CellFrame& frame, const Point3& x) const {
    return evaluate(frame, x, 0).value;
  }

private:
  void add_term(const Exponents& e, double c);
  void normalize();

  std::vector<Term> terms_;
};

} // namespace prismfem
