#include "prismfem/problems.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace prismfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Value and first four derivatives of a separable 1D factor.
using Deriv4 = std::array<double, 5>;
using Factor1D = Deriv4 (*)(double);

// e^x (x^2 - x^3); derivatives via p -> p + p' on the polynomial part.
Deriv4 exp_cubic(double x) {
  std::vector<double> p = {0.0, 0.0, 1.0, -1.0}; // x^2 - x^3
  Deriv4 out{};
  double ex = std::exp(x);
  for (int k = 0; k <= 4; ++k) {
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    out[static_cast<size_t>(k)] = ex * v;
    std::vector<double> next(p.size(), 0.0);
    for (size_t i = 0; i < p.size(); ++i) {
      next[i] += p[i];
      if (i + 1 < p.size()) next[i] += (static_cast<double>(i) + 1.0) * p[i + 1];
    }
    p = std::move(next);
  }
  return out;
}

// e^{ax} sin(bx) as e^{ax}(alpha sin + beta cos); one derivative maps
// (alpha, beta) -> (a alpha - b beta, b alpha + a beta).
Deriv4 exp_sin(double x, double a, double b) {
  Deriv4 out{};
  double ex = std::exp(a * x), s = std::sin(b * x), c = std::cos(b * x);
  double alpha = 1.0, beta = 0.0;
  for (int k = 0; k <= 4; ++k) {
    out[static_cast<size_t>(k)] = ex * (alpha * s + beta * c);
    double na = a * alpha - b * beta;
    double nb = b * alpha + a * beta;
    alpha = na;
    beta = nb;
  }
  return out;
}

Deriv4 poisson_x2(double x) { return exp_sin(x, -2.0 * kPi, 2.0 * kPi); }
Deriv4 poisson_x3(double x) { return exp_sin(x, 3.0 * kPi, 3.0 * kPi); }

// 1 + cos((2x-1) pi) = 1 - cos(2 pi x).
Deriv4 hump(double x) {
  double w = 2.0 * kPi;
  double s = std::sin(w * x), c = std::cos(w * x);
  return {1.0 - c, w * s, w * w * c, -w * w * w * s, -w * w * w * w * c};
}

ExactSolution from_factors(Factor1D f1, Factor1D f2, Factor1D f3, Problem problem) {
  auto eval = [f1, f2, f3](const Point3& x) {
    return std::array<Deriv4, 3>{f1(x.x()), f2(x.y()), f3(x.z())};
  };

  ExactSolution sol;
  sol.u = [eval](const Point3& x) {
    auto d = eval(x);
    return d[0][0] * d[1][0] * d[2][0];
  };
  sol.grad = [eval](const Point3& x) {
    auto d = eval(x);
    return Vec3(d[0][1] * d[1][0] * d[2][0], d[0][0] * d[1][1] * d[2][0],
                d[0][0] * d[1][0] * d[2][1]);
  };
  sol.hess = [eval](const Point3& x) {
    auto d = eval(x);
    Eigen::Matrix3d h;
    h(0, 0) = d[0][2] * d[1][0] * d[2][0];
    h(1, 1) = d[0][0] * d[1][2] * d[2][0];
    h(2, 2) = d[0][0] * d[1][0] * d[2][2];
    h(0, 1) = h(1, 0) = d[0][1] * d[1][1] * d[2][0];
    h(0, 2) = h(2, 0) = d[0][1] * d[1][0] * d[2][1];
    h(1, 2) = h(2, 1) = d[0][0] * d[1][1] * d[2][1];
    return h;
  };
  if (problem == Problem::Poisson) {
    sol.source = [eval](const Point3& x) {
      auto d = eval(x);
      return -(d[0][2] * d[1][0] * d[2][0] + d[0][0] * d[1][2] * d[2][0] +
               d[0][0] * d[1][0] * d[2][2]);
    };
  } else {
    sol.source = [eval](const Point3& x) {
      auto d = eval(x);
      double quartic = d[0][4] * d[1][0] * d[2][0] + d[0][0] * d[1][4] * d[2][0] +
                       d[0][0] * d[1][0] * d[2][4];
      double mixed = d[0][2] * d[1][2] * d[2][0] + d[0][2] * d[1][0] * d[2][2] +
                     d[0][0] * d[1][2] * d[2][2];
      return quartic + 2.0 * mixed;
    };
  }
  return sol;
}

} // namespace

ExactSolution poisson_solution() {
  return from_factors(&exp_cubic, &poisson_x2, &poisson_x3, Problem::Poisson);
}

ExactSolution biharmonic_solution() {
  return from_factors(&hump, &hump, &hump, Problem::Biharmonic);
}

ExactSolution manufactured_solution(Problem problem) {
  return problem == Problem::Poisson ? poisson_solution() : biharmonic_solution();
}

double source_self_check(Problem problem, int n_points, unsigned long seed) {
  ExactSolution sol = manufactured_solution(problem);
  std::mt19937_64 engine(seed);
  auto uniform = [&engine](double lo, double hi) {
    double u01 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u01;
  };

  // Composed 1D stencils, 4th-order accurate: the second derivative uses
  // 5 points, the fourth derivative 7.
  const std::array<double, 5> d2 = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
  const std::array<double, 7> d4 = {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6};

  double max_f = 0.0, max_dev = 0.0;
  for (int p = 0; p < n_points; ++p) {
    Point3 x(uniform(0.1, 0.9), uniform(0.1, 0.9), uniform(0.1, 0.9));
    double fd;
    if (problem == Problem::Poisson) {
      double h = 1e-3;
      fd = 0.0;
      for (int axis = 0; axis < 3; ++axis)
        for (int k = -2; k <= 2; ++k) {
          Point3 y = x;
          y[axis] += k * h;
          fd += d2[static_cast<size_t>(k + 2)] * sol.u(y) / (h * h);
        }
      fd = -fd;
    } else {
      double h = 4e-3;
      fd = 0.0;
      for (int axis = 0; axis < 3; ++axis)
        for (int k = -3; k <= 3; ++k) {
          Point3 y = x;
          y[axis] += k * h;
          fd += d4[static_cast<size_t>(k + 3)] * sol.u(y) / (h * h * h * h);
        }
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
              Point3 y = x;
              y[a] += i * h;
              y[b] += j * h;
              fd += 2.0 * d2[static_cast<size_t>(i + 2)] * d2[static_cast<size_t>(j + 2)] *
                    sol.u(y) / (h * h * h * h);
            }
    }
    double f = sol.source(x);
    max_f = std::max(max_f, std::abs(f));
    max_dev = std::max(max_dev, std::abs(fd - f));
  }
  if (max_f == 0.0) throw std::runtime_error("source_self_check: degenerate sample");
  return max_dev / max_f;
}

} // namespace prismfem
