#pragma once

#include <Eigen/Dense>

namespace prismfem {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;

/// Affine scalar function x -> gradient . x + offset.
struct AffineFn {
  Vec3 gradient = Vec3::Zero();
  double offset = 0.0;

  double operator()(const Point3& x) const { return gradient.dot(x) + offset; }
};

} // namespace prismfem
