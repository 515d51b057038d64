#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "prismfem/frame.hpp"

namespace prismfem {

/// Deterministic RNG used by the verification suite and tests; the helpers
/// derive doubles from raw mt19937_64 bits so streams do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
  explicit Rng(unsigned long seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds

private:
  std::mt19937_64 engine_;
};

/// Random shape-regular prism: random bottom triangle with bounded aspect
/// ratio, random height and offsets. Index 0 always yields the reference
/// prism (unit right triangle times [0,1]).
std::array<Point3, 6> random_prism_vertices(Rng& rng, int index);

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;

  bool pass() const { return max_residual <= tolerance; }
};

struct VerifyReport {
  unsigned long seed = 0;
  int trials = 0;
  std::vector<IdentityResult> entries;

  bool all_pass() const;
  double worst_residual() const;
};

/// Runs every per-cell identity (frame structure, nodal bases, the face
/// lemmas of both elements, quadrature exactness) over `trials` prisms, plus
/// the mesh-level assembly identities (weak continuity, oracle match, SPD)
/// on small structured meshes with `trials` random coefficient vectors.
VerifyReport verify_identities(unsigned long seed, int trials);

/// Fixed-width text form of the report; byte-identical for equal inputs.
std::string format_report(const VerifyReport& report);

} // namespace prismfem
