#include "prismfem/lambda_poly.hpp"

#include <algorithm>
#include <cmath>

namespace prismfem {

LambdaPoly LambdaPoly::constant(double c) {
  LambdaPoly p;
  p.add_term(Exponents{}, c);
  p.normalize();
  return p;
}

LambdaPoly LambdaPoly::lam(int m) {
  Exponents e{};
  e[static_cast<size_t>(m)] = 1;
  return monomial(e, 1.0);
}

LambdaPoly LambdaPoly::monomial(const Exponents& e, double c) {
  LambdaPoly p;
  p.add_term(e, c);
  p.normalize();
  return p;
}

int LambdaPoly::total_degree() const {
  int deg = 0;
  for (const Term& t : terms_) {
    int d = 0;
    for (uint8_t e : t.exp) d += e;
    deg = std::max(deg, d);
  }
  return deg;
}

void LambdaPoly::add_term(const Exponents& e, double c) {
  terms_.push_back(Term{e, c});
}

void LambdaPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exp < b.exp; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().exp == t.exp)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& other) {
  for (const Term& t : other.terms_) add_term(t.exp, t.coeff);
  normalize();
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& other) {
  for (const Term& t : other.terms_) add_term(t.exp, -t.coeff);
  normalize();
  return *this;
}

LambdaPoly& LambdaPoly::operator*=(double s) {
  for (Term& t : terms_) t.coeff *= s;
  normalize();
  return *this;
}

LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly out;
  for (const LambdaPoly::Term& ta : a.terms_)
    for (const LambdaPoly::Term& tb : b.terms_) {
      LambdaPoly::Exponents e;
      for (size_t m = 0; m < 6; ++m) e[m] = static_cast<uint8_t>(ta.exp[m] + tb.exp[m]);
      out.add_term(e, ta.coeff * tb.coeff);
    }
  out.normalize();
  return out;
}

Jet2 LambdaPoly::evaluate(const CellFrame& frame, const Point3& x, int order) const {
  double lam[6];
  for (int m = 0; m < 6; ++m) lam[m] = frame.lambda[static_cast<size_t>(m)](x);

  double d1[6] = {0, 0, 0, 0, 0, 0};
  double d2[6][6] = {};
  Jet2 jet;

  for (const Term& t : terms_) {
    // Powers of each variable appearing in this term.
    double pw[6][4]; // pw[m][p] = lam[m]^p, p <= exponent
    int active[6];
    int n_active = 0;
    for (int m = 0; m < 6; ++m) {
      int e = t.exp[static_cast<size_t>(m)];
      if (e == 0) continue;
      active[n_active++] = m;
      pw[m][0] = 1.0;
      for (int p = 1; p <= e; ++p) pw[m][p] = pw[m][p - 1] * lam[m];
    }

    auto mono = [&](int skip_a, int drop_a, int skip_b, int drop_b) {
      // Product over active vars with exponents reduced by drop_a at skip_a
      // and drop_b at skip_b.
      double prod = t.coeff;
      for (int ai = 0; ai < n_active; ++ai) {
        int m = active[ai];
        int e = t.exp[static_cast<size_t>(m)];
        if (m == skip_a) e -= drop_a;
        if (m == skip_b) e -= drop_b;
        if (e < 0) return 0.0;
        prod *= pw[m][e];
      }
      return prod;
    };

    jet.value += mono(-1, 0, -1, 0);

    if (order >= 1) {
      for (int ai = 0; ai < n_active; ++ai) {
        int m = active[ai];
        d1[m] += t.exp[static_cast<size_t>(m)] * mono(m, 1, -1, 0);
      }
    }
    if (order >= 2) {
      for (int ai = 0; ai < n_active; ++ai) {
        int m = active[ai];
        int em = t.exp[static_cast<size_t>(m)];
        if (em >= 2) d2[m][m] += em * (em - 1) * mono(m, 2, -1, 0);
        for (int bi = ai + 1; bi < n_active; ++bi) {
          int n = active[bi];
          double v = em * t.exp[static_cast<size_t>(n)] * mono(m, 1, n, 1);
          d2[m][n] += v;
          d2[n][m] += v;
        }
      }
    }
  }

  if (order >= 1) {
    for (int m = 0; m < 6; ++m)
      if (d1[m] != 0.0) jet.gradient += d1[m] * frame.lambda[static_cast<size_t>(m)].gradient;
  }
  if (order >= 2) {
    for (int m = 0; m < 6; ++m) {
      const Vec3& gm = frame.lambda[static_cast<size_t>(m)].gradient;
      for (int n = m; n < 6; ++n) {
        double c = d2[m][n];
        if (c == 0.0) continue;
        const Vec3& gn = frame.lambda[static_cast<size_t>(n)].gradient;
        double f = (n == m) ? c : 2.0 * c;
        // Off-diagonal lambda pairs contribute the symmetrized outer product.
        jet.hess[0] += f * gm.x() * gn.x();
        jet.hess[1] += f * gm.y() * gn.y();
        jet.hess[2] += f * gm.z() * gn.z();
        if (n == m) {
          jet.hess[3] += c * gm.x() * gm.y();
          jet.hess[4] += c * gm.x() * gm.z();
          jet.hess[5] += c * gm.y() * gm.z();
        } else {
          jet.hess[3] += c * (gm.x() * gn.y() + gn.x() * gm.y());
          jet.hess[4] += c * (gm.x() * gn.z() + gn.x() * gm.z());
          jet.hess[5] += c * (gm.y() * gn.z() + gn.y() * gm.z());
        }
      }
    }
  }

  return jet;
}

} // namespace prismfem
