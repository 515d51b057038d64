#pragma once

#include "prismfem/solver.hpp"

namespace prismfem {

enum class Problem { Poisson, Biharmonic };

/// -laplace u = f on the unit cube, u = 0 on the boundary, with
/// u = exp(x1 - 2 pi x2 + 3 pi x3) sin(2 pi x2) sin(3 pi x3) (x1^2 - x1^3).
ExactSolution poisson_solution();

/// bilaplace u = f on the unit cube, u = du/dn = 0 on the boundary, with
/// u = (1 + cos((2 x1 - 1) pi)) (1 + cos((2 x2 - 1) pi)) (1 + cos((2 x3 - 1) pi)).
ExactSolution biharmonic_solution();

ExactSolution manufactured_solution(Problem problem);

/// Max deviation of the closed-form source from a high-order finite
/// difference Laplacian/bilaplacian of u, sampled at `n_points` interior
/// points and scaled by the largest sampled |f|. Used as a startup
/// self-check against transcription slips in the derivative chains.
double source_self_check(Problem problem, int n_points = 50, unsigned long seed = 12345);

} // namespace prismfem
